"""Built-in example maps with hand-verified labels.

Every yes/no label carries the one-line derivation that justifies it;
anything that would need deep theory stays "unknown" and is excluded
from hard assertions by the test suites.
"""
from __future__ import annotations

from dataclasses import dataclass

from .harmonic import HarmonicMap, map_to_record

YES = "yes"
NO = "no"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class CatalogEntry:
    map: HarmonicMap
    normal: str
    sense_preserving: str
    phi_normal: dict            # phi spec string -> yes/no/unknown
    provenance: str

    def __post_init__(self):
        if not self.provenance:
            raise ValueError("catalog entries require a provenance string")
        for value in (self.normal, self.sense_preserving, *self.phi_normal.values()):
            if value not in (YES, NO, UNKNOWN):
                raise ValueError(f"bad label {value!r}")


def _entry(label, h, g, normal, sense_preserving, phi_normal, provenance):
    return CatalogEntry(HarmonicMap.from_text(h, g, label), normal,
                        sense_preserving, phi_normal, provenance)


def builtin_catalog() -> list:
    """The curated corpus behind the oracles and the acceptance suite."""
    return [
        _entry(
            "identity", "z", None,
            normal=YES, sense_preserving=YES, phi_normal={"pow:2": YES},
            provenance="(1-r^2)/(1+r^2) has sup 1 at r=0 by calculus; "
                       "h'=1 never vanishes and J=1>0"),
        _entry(
            "constant", "0.3+0.3*i", None,
            normal=YES, sense_preserving=NO, phi_normal={"pow:2": YES},
            provenance="f# identically 0, so every sup is 0; h'=0 "
                       "everywhere fails the Lewy condition"),
        _entry(
            "mobius", "(z+0.5)/(1+0.5*z)", None,
            normal=YES, sense_preserving=YES, phi_normal={"pow:2": YES},
            provenance="disk automorphism: (1-|z|^2)f# = (1-|s|^2)/(1+|s|^2) "
                       "<= 1 with s the image point; h' = 0.75/(1+0.5z)^2 "
                       "never 0"),
        _entry(
            "poly-shear", "z", "z^2/2",
            normal=YES, sense_preserving=YES, phi_normal={"pow:2": YES},
            provenance="|h'|+|g'| = 1+|z| <= 2 so the sup is at most 2; "
                       "dilatation z has |z|<1 on the disk"),
        _entry(
            "exp-i-cusp", "exp(i/(1-z))", None,
            normal=NO, sense_preserving=YES, phi_normal={"pow:2": YES},
            provenance="on the real radius |f|=1 and |h'|=1/(1-x)^2, so "
                       "(1-x^2)f#(x) = (2-d)/(2d) -> inf with d = 1-x; "
                       "f#(1-r)^2 = 1/(2 cosh Im(1/(1-z))) * ((1-r)/|1-z|)^2 "
                       "<= 1/2, so the pow:2 ratio stays bounded; exp never "
                       "vanishes so h' != 0 and J = |h'|^2 > 0"),
        _entry(
            "exp-i-cusp-shear", "exp(i/(1-z))", "z^2/4",
            normal=NO, sense_preserving=NO, phi_normal={"pow:2": YES},
            provenance="the g-part adds |g'| = |z|/2 <= 1/2 to the "
                       "numerator, so the real-radius blow-up of the "
                       "holomorphic part persists and the pow:2 ratio gains "
                       "at most (1-r)^2/2; J < 0 where |h'| = "
                       "e^{-Im(1/(1-z))}/|1-z|^2 drops below |z|/2 "
                       "(Im z > 0 near z = 1)"),
        _entry(
            "sense-reversing", "z", "2*z",
            normal=YES, sense_preserving=NO, phi_normal={"pow:2": YES},
            provenance="|f| = |z + 2 conj z| <= 3 so f# = 3/(1+|f|^2) is "
                       "between 0.3 and 3 and the sup is at most 3; "
                       "J = 1-4 = -3 < 0"),
        _entry(
            "double-zero", "z^2", None,
            normal=YES, sense_preserving=NO, phi_normal={"pow:2": YES},
            provenance="(1-r^2) 2r/(1+r^4) <= 2 by inspection; h'(0) = 0 "
                       "fails the Lewy condition; the zero at 0 has "
                       "multiplicity 2, exercising the zero-fiber bound "
                       "with k = 2"),
    ]


def lookup(label: str):
    for entry in builtin_catalog():
        if entry.map.label == label:
            return entry
    raise KeyError(f"no catalog entry labeled {label!r}")


def catalog_maps() -> list:
    return [entry.map for entry in builtin_catalog()]


def export_records() -> list:
    """Map file records plus the labels sidecar, one record per entry."""
    out = []
    for entry in builtin_catalog():
        record = map_to_record(entry.map)
        record["labels"] = {
            "normal": entry.normal,
            "sense_preserving": entry.sense_preserving,
            "phi_normal": dict(entry.phi_normal),
        }
        record["provenance"] = entry.provenance
        out.append(record)
    return out
