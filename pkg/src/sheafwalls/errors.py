"""Exception hierarchy.

Every domain failure raised by the library derives from :class:`SheafWallsError`
and carries a short machine-readable ``code`` that the CLI echoes on stderr.
"""

from __future__ import annotations


class SheafWallsError(Exception):
    code = "domain_error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict:
        out = {"code": self.code, "message": self.message}
        if self.details:
            out["details"] = {k: str(v) for k, v in sorted(self.details.items())}
        return out


class DimensionError(SheafWallsError, ValueError):
    code = "dimension_mismatch"


class LatticeError(SheafWallsError, ValueError):
    code = "invalid_lattice"


class SignatureError(LatticeError):
    code = "wrong_signature"


class PositivityError(SheafWallsError, ValueError):
    """A class that must have positive square (a polarization) does not."""

    code = "not_positive"


class IntegralityError(SheafWallsError, ValueError):
    code = "not_integral"


class ComparisonError(SheafWallsError, ValueError):
    code = "incomparable"


class RankError(SheafWallsError, ValueError):
    code = "rank_out_of_range"


class ConeError(SheafWallsError, ValueError):
    code = "invalid_cone"


class SubdivisionError(ConeError):
    code = "subdivision_depth_exceeded"


class WallPositionError(SheafWallsError, ValueError):
    """A point that must avoid the wall arrangement lies on it (or vice versa)."""

    code = "on_wall"


class GenericityError(SheafWallsError, RuntimeError):
    code = "non_generic_wall_point"


class FamilyError(SheafWallsError, ValueError):
    code = "family_invariant_failed"


class NumberTheoryError(SheafWallsError, ValueError):
    code = "bad_number_theory_input"


class SpecError(SheafWallsError, ValueError):
    """Malformed problem file; ``path`` locates the offending field."""

    code = "spec_error"

    def __init__(self, message: str, path: str = "$", **details):
        super().__init__(f"{path}: {message}", path=path, **details)
        self.path = path


class ThresholdError(SheafWallsError, ValueError):
    code = "threshold_too_small"
