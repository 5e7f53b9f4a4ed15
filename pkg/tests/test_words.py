import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from halfdensity import words
from halfdensity.rng import RandomSource
from halfdensity.words import (
    ModelParams,
    Presentation,
    ResourceLimitError,
    concat_reduce,
    free_reduce,
    invert,
    is_reduced,
    presentation_from_text,
    presentation_to_text,
    sample_presentation,
    sample_relator_matrix,
    sample_word,
    subword,
    word_from_str,
    word_to_str,
)

letters = st.integers(min_value=-4, max_value=4).filter(lambda x: x != 0)
raw_words = st.lists(letters, max_size=40)


def W(s):
    return word_from_str(s)


class TestFreeReduce:
    def test_adjacent_cancellation(self):
        assert free_reduce([1, -1, 2]) == (2,)

    def test_identity(self):
        assert free_reduce([]) == ()

    def test_nested_cancellation(self):
        assert free_reduce(W("abBAc")) == (3,)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            free_reduce([1, 0])

    @given(raw_words)
    def test_idempotent_and_nonincreasing(self, raw):
        once = free_reduce(raw)
        assert len(once) <= len(raw)
        assert free_reduce(once) == once
        assert is_reduced(once)

    @given(raw_words)
    def test_parity_preserved(self, raw):
        assert (len(free_reduce(raw)) - len(raw)) % 2 == 0


class TestConcatReduce:
    def test_full_cancellation(self):
        assert concat_reduce(W("ab"), W("BA")) == ()

    def test_identity_element(self):
        assert concat_reduce(W("ab"), ()) == W("ab")
        assert concat_reduce((), W("ab")) == W("ab")

    def test_partial_cancellation(self):
        # abab * (baab)^-1 leaves the commutator-like a b a^-1 b^-1
        assert concat_reduce(W("abab"), W("BAAB")) == W("abAB")

    @given(raw_words)
    def test_inverse_cancels(self, raw):
        u = free_reduce(raw)
        assert concat_reduce(u, invert(u)) == ()

    @given(raw_words, raw_words)
    def test_length_bounds_and_parity(self, raw1, raw2):
        u, v = free_reduce(raw1), free_reduce(raw2)
        out = concat_reduce(u, v)
        assert abs(len(u) - len(v)) <= len(out) <= len(u) + len(v)
        assert (len(out) + len(u) + len(v)) % 2 == 0
        assert out == free_reduce(u + v)


class TestInvert:
    def test_basic(self):
        assert invert(W("ab")) == W("BA")

    def test_empty(self):
        assert invert(()) == ()

    def test_mixed(self):
        assert invert(W("abA")) == W("aBA")

    @given(raw_words)
    def test_involution(self, raw):
        u = free_reduce(raw)
        assert invert(invert(u)) == u


class TestSubword:
    def test_prefix(self):
        assert subword(W("abab"), 1, 2) == W("ab")

    def test_whole_word(self):
        assert subword(W("abab"), 1, 4) == W("abab")

    def test_single(self):
        assert subword(W("abab"), 3, 3) == W("a")

    @pytest.mark.parametrize("i,j", [(0, 2), (1, 5), (3, 2), (5, 5)])
    def test_out_of_range(self, i, j):
        with pytest.raises(IndexError):
            subword(W("abab"), i, j)

    @given(raw_words, st.data())
    def test_fragment_of_reduced_is_reduced(self, raw, data):
        u = free_reduce(raw)
        if not u:
            return
        i = data.draw(st.integers(1, len(u)))
        j = data.draw(st.integers(i, len(u)))
        assert is_reduced(subword(u, i, j))


class TestLetters:
    def test_roundtrip(self):
        for x in (1, -1, 3, -26, 26):
            assert words.char_to_letter(words.letter_to_char(x)) == x

    def test_inverse_involution(self):
        assert words.inverse(words.inverse(5)) == 5
        assert words.inverse(3) != 3

    def test_make_letter(self):
        assert words.make_letter(2) == 2
        assert words.make_letter(2, inverted=True) == -2
        assert words.letter_index(-7) == 7
        assert words.is_inverted(-7) and not words.is_inverted(7)


class TestModelParams:
    def test_density_half_exact_power(self):
        p = ModelParams.from_density(2, 12, 0.5)
        assert p.num == 729

    def test_from_f(self):
        p = ModelParams.from_f(3, 10, 0.1)
        assert p.num == 625

    def test_density_roundtrip(self):
        p = ModelParams.from_density(2, 20, 0.55)
        assert p.num == 3**11
        assert abs(p.density - 0.55) < 1e-12
        assert abs(p.f - (0.5 - 0.55)) < 1e-12

    def test_non_integer_exponent_rounds(self):
        p = ModelParams.from_density(2, 8, 0.45)
        assert p.num == round(3**3.6)

    def test_validation(self):
        with pytest.raises(ValueError):
            ModelParams(1, 4, 2)
        with pytest.raises(ValueError):
            ModelParams(2, 0, 2)
        with pytest.raises(ValueError):
            ModelParams(2, 4, 0)


class TestSampling:
    def test_shape_and_reduced(self):
        p = ModelParams(2, 4, 3)
        pres = sample_presentation(p, RandomSource(0))
        assert len(pres.relators) == 3
        assert all(len(r) == 4 for r in pres.relators)
        pres.validate()

    def test_deterministic(self):
        p = ModelParams(3, 9, 50)
        a = sample_presentation(p, RandomSource(123))
        b = sample_presentation(p, RandomSource(123))
        assert a.relators == b.relators
        c = sample_presentation(p, RandomSource(124))
        assert a.relators != c.relators

    def test_single_word_matches_matrix_row(self):
        w = sample_word(2, 6, RandomSource(5))
        row = sample_relator_matrix(2, 6, 1, RandomSource(5))[0]
        assert w == tuple(row)

    def test_budget(self):
        with pytest.raises(ResourceLimitError):
            sample_presentation(ModelParams(2, 100, 10**7), RandomSource(0))

    def test_length_one_marginal(self):
        # each of the 2m letters has probability 1/(2m)
        n = 200_000
        mat = sample_relator_matrix(2, 1, n, RandomSource(7))
        counts = {x: int((mat[:, 0] == x).sum()) for x in (1, 2, -1, -2)}
        p = 1 / 4
        se = (p * (1 - p) / n) ** 0.5
        for x, cnt in counts.items():
            assert abs(cnt / n - p) < 4 * se, (x, cnt)

    def test_all_words_reachable_and_reduced(self):
        mat = sample_relator_matrix(2, 3, 50_000, RandomSource(11))
        seen = {tuple(row) for row in mat.tolist()}
        assert len(seen) == 36  # 4 * 3 * 3 freely reduced words of length 3
        assert all(is_reduced(w) for w in seen)

    def test_length_two_uniform(self):
        # each of the 2m(2m-1) = 12 words has probability 1/12
        n = 240_000
        mat = sample_relator_matrix(2, 2, n, RandomSource(13))
        counts = np.zeros(16, dtype=np.int64)
        codes = np.where(mat > 0, mat - 1, 1 - mat)
        np.add.at(counts, codes[:, 0] * 4 + codes[:, 1], 1)
        live = counts[counts > 0]
        assert len(live) == 12
        p = 1 / 12
        se = (p * (1 - p) / n) ** 0.5
        assert all(abs(c / n - p) < 4 * se for c in live)

    def test_length_three_chi_square(self):
        # uniformity over all 36 outcomes, not rejected at alpha = 0.001
        from scipy.stats import chi2

        n = 1_000_000
        mat = sample_relator_matrix(2, 3, n, RandomSource(14))
        codes = np.where(mat > 0, mat - 1, 1 - mat)
        flat = (codes[:, 0] * 16 + codes[:, 1] * 4 + codes[:, 2]).astype(np.int64)
        counts = np.bincount(flat, minlength=64)
        live = counts[counts > 0]
        assert len(live) == 36
        expected = n / 36
        stat = float(((live - expected) ** 2 / expected).sum())
        assert stat < chi2.ppf(0.999, 35)


class TestTextFormat:
    def test_roundtrip_simple(self):
        pres = Presentation(2, [W("abAB"), W("bb")])
        assert presentation_from_text(presentation_to_text(pres)).relators == pres.relators

    def test_format_shape(self):
        text = presentation_to_text(Presentation(2, [W("ab")]))
        assert text == "m=2\nab\n"

    def test_comments_and_blank_lines(self):
        pres = presentation_from_text("# header\nm=2\n\n# note\nab\nBA\n")
        assert pres.relators == [W("ab"), W("BA")]

    def test_rejects_trailing_whitespace(self):
        with pytest.raises(ValueError):
            presentation_from_text("m=2\nab \n")

    def test_rejects_unreduced(self):
        with pytest.raises(ValueError):
            presentation_from_text("m=2\naA\n")

    def test_rejects_letter_outside_m(self):
        with pytest.raises(ValueError):
            presentation_from_text("m=2\nabc\n")

    def test_rejects_empty_relator(self):
        with pytest.raises(ValueError):
            presentation_to_text(Presentation(2, [()]))

    def test_rejects_large_m(self):
        with pytest.raises(ValueError):
            presentation_to_text(Presentation(27, [(27,)]))

    @given(st.integers(2, 5), st.lists(raw_words.map(free_reduce).filter(len), max_size=8))
    def test_roundtrip_property(self, m, relators):
        rel = [r for r in relators if all(abs(x) <= m for x in r)]
        pres = Presentation(m, rel)
        back = presentation_from_text(presentation_to_text(pres))
        assert back.m == m and back.relators == rel


class TestStrForms:
    def test_word_str_roundtrip(self):
        for s in ("", "ab", "aBcC"):
            assert word_to_str(word_from_str(s)) == s

    def test_word_from_str_respects_m(self):
        with pytest.raises(ValueError):
            word_from_str("abc", m=2)
