"""Built-in test templates.

Three deterministic spectra cover the test surface:

* ``wave_template`` — a smooth oscillating 1-periodic pattern whose energy
  sits almost entirely below frequency 8, plus a slowly decaying ``0.3/k``
  tail.  The tail is what separates the two adaptive estimators: the
  penalized criterion gives up on it early, the plain one chases it.
* ``sobolev_template`` — a deterministic near-extremal member of a periodic
  Sobolev ball, used by rate studies.
* ``spike_template`` — all energy in a single cosine; the sharpest possible
  selection problem.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidParameterError
from .spectral import Template

__all__ = ["WAVE_DC", "WAVE_HARMONICS", "wave_template", "sobolev_template",
           "spike_template", "TEMPLATE_BUILDERS", "catalog_template"]

# Mean level and (cosine, sine) amplitudes of the dominant harmonics k = 1..7.
WAVE_DC = 0.25
WAVE_HARMONICS = (
    (0.95, 0.35),
    (-0.45, 0.50),
    (0.30, -0.40),
    (0.18, 0.12),
    (-0.11, 0.09),
    (0.07, -0.05),
    (0.04, 0.03),
)
# Tail |coeff_k| = WAVE_TAIL_SCALE / k with phase WAVE_TAIL_PHASE * k, k >= 8.
WAVE_TAIL_SCALE = 0.3
WAVE_TAIL_PHASE = 0.9


def wave_template(k_max: int = 40) -> Template:
    """The standard test wave on the band ``-k_max..k_max`` (``k_max >= 8``)."""
    if k_max < 8:
        raise InvalidParameterError(
            f"wave template needs k_max >= 8 to carry its tail, got {k_max}"
        )
    coeffs = np.zeros(2 * k_max + 1, dtype=np.complex128)
    coeffs[k_max] = WAVE_DC
    for i, (a, b) in enumerate(WAVE_HARMONICS, start=1):
        coeffs[k_max + i] = (a - 1j * b) / 2.0
    k_tail = np.arange(8, k_max + 1)
    coeffs[k_max + 8 :] = (WAVE_TAIL_SCALE / k_tail) * np.exp(1j * WAVE_TAIL_PHASE * k_tail)
    coeffs[:k_max] = np.conj(coeffs[k_max + 1 :][::-1])
    return Template(coeffs=coeffs, k_max=k_max, real_valued=True, label="wave")


def sobolev_template(smoothness: float, radius: float, k_max: int = 64, *,
                     delta: float = 0.01) -> Template:
    """Deterministic member of the Sobolev ball of given smoothness and radius.

    The spectrum is ``|coeff_k| = c |k|^{-(s + 1/2 + delta/2)}`` (with
    ``coeff_0 = c``), all phases zero, and ``c`` chosen so that
    ``sum_k (1 + |k|^{2s}) |coeff_k|^2`` equals ``radius`` exactly on the
    carried band.  The small ``delta`` keeps the ball membership strict
    rather than borderline.
    """
    if not (smoothness > 0.0):
        raise InvalidParameterError(f"smoothness must be > 0, got {smoothness}")
    if not (radius > 0.0):
        raise InvalidParameterError(f"radius must be > 0, got {radius}")
    if not (delta > 0.0):
        raise InvalidParameterError(f"delta must be > 0, got {delta}")
    if k_max < 1:
        raise InvalidParameterError(f"k_max must be >= 1, got {k_max}")
    k = np.arange(1, k_max + 1).astype(float)
    shape = k ** (-(smoothness + 0.5 + delta / 2.0))
    weights = 1.0 + k ** (2.0 * smoothness)
    # sum over k of (1 + |k|^{2s}) |coeff_k|^2 = c^2 * (1 + 2 sum_k w_k shape_k^2)
    total = 1.0 + 2.0 * float(np.sum(weights * shape ** 2))
    c = float(np.sqrt(radius / total))
    coeffs = np.zeros(2 * k_max + 1, dtype=np.complex128)
    coeffs[k_max] = c
    coeffs[k_max + 1 :] = c * shape
    coeffs[:k_max] = np.conj(coeffs[k_max + 1 :][::-1])
    return Template(coeffs=coeffs, k_max=k_max, real_valued=True,
                    label=f"sobolev(s={smoothness})")


def spike_template(k_max: int = 40, location: int = 2,
                   amplitude: float = 1.0) -> Template:
    """Single cosine ``amplitude * cos(2 pi * location * x)``."""
    if k_max < 1:
        raise InvalidParameterError(f"k_max must be >= 1, got {k_max}")
    if not (1 <= location <= k_max):
        raise InvalidParameterError(f"location must be in 1..{k_max}, got {location}")
    coeffs = np.zeros(2 * k_max + 1, dtype=np.complex128)
    coeffs[k_max + location] = amplitude / 2.0
    coeffs[k_max - location] = amplitude / 2.0
    return Template(coeffs=coeffs, k_max=k_max, real_valued=True,
                    label=f"spike(k={location})")


TEMPLATE_BUILDERS = {
    "wave": wave_template,
    "sobolev": lambda k_max: sobolev_template(smoothness=2.0, radius=5.0, k_max=k_max),
    "spike": spike_template,
}


def catalog_template(name: str, k_max: int) -> Template:
    """Look up a catalog template by name at the requested band width."""
    try:
        builder = TEMPLATE_BUILDERS[name]
    except KeyError:
        raise InvalidParameterError(
            f"unknown template {name!r}; catalog names: {sorted(TEMPLATE_BUILDERS)}"
        ) from None
    return builder(k_max)
