"""
Spectral helpers shared by the DMD variants: principal logarithm, Cayley factors and stable powers.
"""
import numpy as np

from oscillatory_dmd.dmd.dtos.models import Scheme

UNIT_MODULUS_TOL = 1e-12


def principal_log(z) -> np.ndarray:
    """
    Principal logarithm with the argument in (-pi, pi]; points on the negative real axis map to +pi.
    """
    z = np.asarray(z, dtype=np.complex128)
    angle = np.angle(z)
    angle = np.where(angle == -np.pi, np.pi, angle)
    with np.errstate(divide="ignore"):
        return np.log(np.abs(z)) + 1j * angle


def spectral_factors(eigenvalues, tau: float, scheme: Scheme) -> np.ndarray:
    """
    Cayley transforms of real eigenvalues:
    CN: (1 - i tau lambda / 2) / (1 + i tau lambda / 2), SI: (1 - i tau lambda) / (1 + i tau lambda).
    """
    eigenvalues = np.asarray(eigenvalues, dtype=np.float64)
    half = 0.5 * tau * eigenvalues if scheme is Scheme.CN else tau * eigenvalues
    return (1 - 1j * half) / (1 + 1j * half)


def stable_power(d, k: int) -> np.ndarray:
    """
    Elementwise d**k evaluated as exp(k * log d) with the principal logarithm.
    Factors within 1e-12 of the unit circle are taken as exactly unit modulus, so their powers
    stay on the circle for any k. Zero entries give 0 for k > 0; k = 0 gives exactly 1.
    """
    d = np.asarray(d, dtype=np.complex128)
    if k < 0:
        raise ValueError(f"Power must be nonnegative, got {k}")
    if k == 0:
        return np.ones_like(d)
    result = np.zeros_like(d)
    nonzero = d != 0
    log_d = principal_log(d[nonzero])
    on_circle = np.abs(np.abs(d[nonzero]) - 1) <= UNIT_MODULUS_TOL
    log_d = np.where(on_circle, 1j * log_d.imag, log_d)
    result[nonzero] = np.exp(k * log_d)
    return result


def stable_power_table(d, ks) -> np.ndarray:
    """
    Matrix whose column j is stable_power(d, ks[j]).
    """
    d = np.asarray(d, dtype=np.complex128)
    return np.stack([stable_power(d, int(k)) for k in ks], axis=1) if len(ks) else np.zeros((d.shape[0], 0), complex)
