"""Words module: words, morphisms, factor families, conjugacy classes."""

import pytest

from wordav import (
    CompletenessError,
    ConjugacyClass,
    FactorSet,
    ImageFactors,
    MorphicFactors,
    Morphism,
    StabilizationError,
    Word,
    WordFactors,
    apply_morphism,
    b4_factors,
    conjugates,
    contained_conjugacy_classes,
    factor_set,
    fixed_point_prefix,
    load_morphism,
    named_morphism,
)


class TestWord:
    def test_text_round_trip(self):
        w = Word.from_text("0121032")
        assert w.to_text() == "0121032"
        assert len(w) == 7

    def test_from_letters(self):
        assert Word.from_letters([0, 1, 2, 1]).to_text() == "0121"

    def test_alphabet_size_is_max_letter_plus_one(self):
        assert Word.from_text("010").alphabet_size == 2
        assert Word.from_text("03").alphabet_size == 4

    def test_ordering_is_length_then_lexicographic(self):
        assert Word.from_text("01") < Word.from_text("10")
        assert Word.from_text("0") < Word.from_text("00")

    def test_rotated(self):
        assert Word.from_text("0123").rotated(1).to_text() == "1230"
        assert Word.from_text("0123").rotated(0).to_text() == "0123"

    def test_factors_of_given_length(self):
        assert [f.to_text() for f in Word.from_text("010").factors(2)] == ["01", "10"]


class TestMorphism:
    def test_load_with_comments_and_blanks(self):
        m = load_morphism("0 -> 01\n1 -> 21  # note\n\n2 -> 03\n3 -> 23\n")
        assert [im.to_text() for im in m.images] == ["01", "21", "03", "23"]
        assert m.uniform_width == 2
        assert m.source_size == 4
        assert m.target_size == 4

    def test_apply(self):
        m = load_morphism("0 -> 01\n1 -> 21\n2 -> 03\n3 -> 23\n")
        assert apply_morphism(m, Word.from_text("012")).to_text() == "012103"
        assert m(Word.from_text("012")).to_text() == "012103"

    def test_apply_outside_domain_raises(self):
        m = Morphism.from_texts(["01", "10"])
        with pytest.raises(ValueError):
            m(Word.from_text("012"))

    def test_erasing_rejected(self):
        with pytest.raises(ValueError):
            Morphism.from_texts(["01", ""])

    def test_non_uniform_width_is_none(self):
        m = Morphism.from_texts(["01", "0"])
        assert m.uniform_width is None

    def test_named_morphism_tables(self):
        assert [im.to_text() for im in named_morphism("b4").images] == [
            "01",
            "21",
            "03",
            "23",
        ]
        assert [im.to_text() for im in named_morphism("g3").images] == [
            "0010",
            "1122",
            "0200",
            "1212",
        ]
        assert [im.to_text() for im in named_morphism("g6").images] == [
            "01230",
            "24134",
            "52340",
            "24513",
        ]
        assert [im.to_text() for im in named_morphism("m6").images] == [
            "021210",
            "012220",
            "012111",
            "002221",
            "001112",
        ]
        assert named_morphism("g2").uniform_width == 19
        assert named_morphism("m15").uniform_width == 15

    def test_unknown_name_raises_key_error(self):
        with pytest.raises(KeyError):
            named_morphism("zz")


class TestFixedPoint:
    def test_prefix_is_stable_under_the_morphism(self):
        m = named_morphism("b4")
        p = fixed_point_prefix(m, 0, 16)
        assert p.to_text() == "0121032101230321"
        longer = fixed_point_prefix(m, 0, 64)
        assert longer.to_text().startswith(p.to_text())
        image = apply_morphism(m, p).to_text()
        assert image.startswith(p.to_text())

    def test_seed_whose_image_does_not_extend_raises(self):
        m = Morphism.from_texts(["10", "01"])  # image of 0 does not start with 0
        with pytest.raises(ValueError):
            fixed_point_prefix(m, 0, 8)


class TestFactorFamilies:
    def test_word_factors(self):
        fam = WordFactors(Word.from_text("0121032101230321"))
        fs = fam.factor_set(2)
        assert fs.complete
        assert sorted(f.to_text() for f in fs.members) == [
            "01",
            "03",
            "10",
            "12",
            "21",
            "23",
            "30",
            "32",
        ]

    def test_factor_set_function_matches_family(self):
        w = Word.from_text("0121032101230321")
        a = factor_set(w, 3).sorted_members()
        b = WordFactors(w).factor_set(3).sorted_members()
        assert a == b

    def test_morphic_factor_counts_grow_linearly(self):
        fam = b4_factors()
        counts = [len(fam.factor_set(n).members) for n in range(1, 9)]
        assert counts == [4, 8, 12, 16, 20, 24, 28, 32]

    def test_morphic_factors_match_long_prefix_factors(self):
        fam = b4_factors()
        prefix = fixed_point_prefix(named_morphism("b4"), 0, 4096)
        for n in (2, 5, 9):
            from_family = {f.to_text() for f in fam.factor_set(n).members}
            from_prefix = {
                prefix.to_text()[i : i + n] for i in range(len(prefix) - n + 1)
            }
            assert from_family == from_prefix

    def test_image_factors_are_factors_of_images(self):
        g3 = named_morphism("g3")
        fam = ImageFactors(g3, b4_factors())
        fs = fam.factor_set(3)
        assert fs.complete
        probe = apply_morphism(g3, fixed_point_prefix(named_morphism("b4"), 0, 512))
        text = probe.to_text()
        for f in fs.sorted_members():
            assert f.to_text() in text


class TestConjugacy:
    def test_conjugates_members_are_all_rotations(self):
        cc = conjugates(Word.from_text("110"))
        assert cc.representative.to_text() == "011"
        assert cc.size == 3
        assert [m.to_text() for m in cc.members()] == ["011", "110", "101"]

    def test_periodic_word_has_small_class(self):
        assert conjugates(Word.from_text("0101")).size == 2

    def test_explicit_class_keeps_given_representative(self):
        assert ConjugacyClass(Word.from_text("110")).representative.to_text() == "110"

    def test_contained_classes(self):
        fs = factor_set(Word.from_text("0102010"), 2)
        reps = [c.representative.to_text() for c in contained_conjugacy_classes(fs)]
        assert reps == ["01", "02"]

    def test_no_classes_when_rotation_missing(self):
        # 012 contains 01 and 12 but neither 10 nor 21, so no class closes
        fs = factor_set(Word.from_text("012"), 2)
        assert contained_conjugacy_classes(fs) == []

    def test_single_letter_period_class_is_contained(self):
        # the class of 00 is just {00}, so it is contained in 001
        fs = factor_set(Word.from_text("001"), 2)
        reps = [c.representative.to_text() for c in contained_conjugacy_classes(fs)]
        assert reps == ["00"]

    def test_incomplete_factor_set_is_rejected(self):
        fs = factor_set(Word.from_text("0102010"), 2)
        partial = FactorSet(
            length=fs.length, members=fs.members, complete=False, evidence=fs.evidence
        )
        with pytest.raises(CompletenessError):
            contained_conjugacy_classes(partial)


class TestStabilization:
    def test_low_iteration_cap_raises(self):
        fam = MorphicFactors(named_morphism("b4"), seed=0, iteration_cap=2)
        with pytest.raises(StabilizationError):
            fam.factor_set(64)
