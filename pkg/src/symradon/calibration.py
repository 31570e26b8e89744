"""Frozen normalization constants: computed once on reference phantoms, then reused."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from .numerics import QuadratureSpec

CONSTANT_KEYS = ("c_d_3_2", "C_d_3_2", "kappa", "horocycle_mu_exponent", "range_kappa0", "range_mu")

# The range law carries the sign (-1)^n; calibration confirms it instead of storing it.
RANGE_PARITY = True


@dataclass(frozen=True)
class Constants:
    """Every calibrated constant.

    ``c_d_3_2`` and ``C_d_3_2`` scale the plane inversions in R^3 and H^3,
    ``kappa`` is the spectral Plancherel constant, ``horocycle_mu_exponent``
    the exponent in the horocycle-space measure ``e^{mu t} dt d theta / 2pi``,
    and ``range_*`` the normalization of the range law
    (``Psi_n = e^{kappa0 t} psi_n``, multiplier argument ``mu lambda``, sign
    ``(-1)^n``).
    """

    c_d_3_2: float
    C_d_3_2: float
    kappa: float
    horocycle_mu_exponent: float
    range_kappa0: float
    range_mu: float

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Constants":
        missing = set(CONSTANT_KEYS) - set(data)
        unknown = set(data) - set(CONSTANT_KEYS)
        if missing or unknown:
            raise ValueError(f"constants file: missing {sorted(missing)}, unknown {sorted(unknown)}")
        return cls(**{f.name: data[f.name] for f in fields(cls)})

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "Constants":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def reference_duality_test_function(t, theta):
    return np.exp(-((t - 0.3) ** 2)) * (1 + 0.3 * np.cos(theta))


def calibrate_plane_constant(space: str, spec=None,
                             quad: QuadratureSpec | None = None) -> float:
    """``f(x) / raw`` for the uncalibrated plane inversion of a reference phantom at its center."""
    from . import euclid_radon, hyp_radon
    from .geometry import PhantomSpec, phantom

    quad = quad or QuadratureSpec()
    spec = spec or PhantomSpec("gaussian-of-distance", space=space)
    f = phantom(spec)
    if space == "R3":
        raw = euclid_radon.invert_dplane(euclid_radon.sinogram(f, 2, quad), f.center, 1.0, quad)
    elif space == "H3":
        raw = hyp_radon.invert_hyp_tg(hyp_radon.hyp_sinogram(f, 2, quad), f.center, 1.0, quad)
    else:
        raise ValueError("plane constants exist for R3 and H3")
    return float(f(f.center) / raw.value)


def calibrate_kappa(quad: QuadratureSpec | None = None) -> float:
    from .geometry import PhantomSpec, phantom
    from .hfourier import SpectralGrid, l2_norm_squared, spectral_energy

    f = phantom(PhantomSpec("gaussian-of-distance", width=1.0))
    return l2_norm_squared(f) / spectral_energy(SpectralGrid.from_field(f))


def calibrate(quad: QuadratureSpec | None = None) -> Constants:
    """Compute every constant on its reference phantom."""
    from .geometry import PhantomSpec, phantom
    from .horocycle import HorocycleSinogram, measure_mu_exponent, range_coefficients, \
        resolve_range_normalization

    quad = quad or QuadratureSpec()
    c2 = calibrate_plane_constant("R3", quad=quad)
    C2 = calibrate_plane_constant("H3", quad=quad)
    kappa = calibrate_kappa(quad)
    ref = phantom(PhantomSpec("gaussian-of-distance", width=0.8, center=0.2 + 0.1j))
    mu, _ = measure_mu_exponent(ref, reference_duality_test_function, spec=quad)
    accepted, _ = resolve_range_normalization(range_coefficients(HorocycleSinogram.from_field(ref, quad)))
    if accepted is None:
        raise RuntimeError("no range-law normalization passed both checks")
    kappa0, rmu, parity = accepted
    if bool(parity) != RANGE_PARITY:
        raise RuntimeError("range law resolved to an unexpected sign convention")
    return Constants(c2, C2, kappa, float(mu), float(kappa0), float(rmu))


def expected_constants() -> dict:
    """Closed-form values the calibration is expected to reproduce."""
    return {"c_d_3_2": 2 / math.pi, "C_d_3_2": 2 / math.pi, "kappa": 1 / (2 * math.pi),
            "horocycle_mu_exponent": 1.0, "range_kappa0": 0.5, "range_mu": 2.0}
