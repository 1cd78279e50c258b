"""Named morphisms and formulas used by the verification suite.

The binary-expansion fixed point b4 avoids AB.AC.BA.CA.CB and every
circular formula; g2, g3, g6 map it (or ternary/senary analogues) to the
alphabets witnessing avoidability of circular formulas; m15 and m6 map
Dejean-threshold words over five letters to binary/ternary words for the
other basis formulas.
"""

from __future__ import annotations

from .formulas import Formula, parse_formula
from .words import ImageFactors, MorphicFactors, Morphism

B4 = Morphism.from_texts(["01", "21", "03", "23"])

G2 = Morphism.from_texts(
    [
        "0000101001110110100",
        "0011100010100111101",
        "0000111100010110100",
        "0011110110100111101",
    ]
)

G3 = Morphism.from_texts(["0010", "1122", "0200", "1212"])

G6 = Morphism.from_texts(["01230", "24134", "52340", "24513"])

M15 = Morphism.from_texts(
    [
        "001111010010110",
        "001110100101110",
        "001101001011110",
        "000111010001011",
        "000110100001011",
    ]
)

M6 = Morphism.from_texts(
    [
        "021210",
        "012220",
        "012111",
        "002221",
        "001112",
    ]
)

MORPHISMS: dict[str, Morphism] = {
    "b4": B4,
    "g2": G2,
    "g3": G3,
    "g6": G6,
    "m15": M15,
    "m6": M6,
}


def named_morphism(name: str) -> Morphism:
    try:
        return MORPHISMS[name]
    except KeyError:
        raise KeyError(
            f"unknown morphism {name!r}; available: {', '.join(sorted(MORPHISMS))}"
        ) from None


def b4_factors() -> MorphicFactors:
    """Factor family of the fixed point 0121032101230321..."""
    return MorphicFactors(B4, seed=0)


def image_family(name: str) -> ImageFactors:
    """Factor family of g(b4) for a named uniform morphism g."""
    return ImageFactors(named_morphism(name), b4_factors())


# Minimal avoidable formulas on at most 3 variables: every avoidable
# formula with at most 3 variables is divisible by one of these, so their
# avoidability indices bound the index of everything they divide.
BASIS_3 = tuple(
    parse_formula(text)
    for text in (
        "AA",
        "ABA.BAB",
        "ABCA.BCAB.CABC",
        "ABCBA.CBABC",
        "ABCA.CABC.BCB",
        "ABCA.BCAB.CBC",
        "AB.AC.BA.CA.CB",
    )
)


def basis_formula(text: str) -> Formula:
    formula = parse_formula(text)
    if formula not in BASIS_3:
        raise KeyError(f"{text!r} is not one of the tracked basis formulas")
    return formula
