"""Independent reference values frozen into the C++ tests.

Run with python3; needs numpy and scipy. Nothing here imports the C++ code.
"""
import numpy as np
from scipy import integrate, special


def ball_well_2d_at_unit_k():
    # (2 pi)^-1 \int_{|x|<=1} (-1) exp(-i k.x) dx with k = (1, 0), brute force on
    # the square [-1, 1]^2 (the imaginary part vanishes by symmetry).
    def integrand(y, x):
        return -np.cos(x) / (2 * np.pi) if x * x + y * y <= 1.0 else 0.0

    val, err = integrate.dblquad(integrand, -1, 1, lambda x: -np.sqrt(1 - x * x), lambda x: np.sqrt(1 - x * x),
                                 epsabs=1e-13, epsrel=1e-13)
    return val, err


def gaussian_circle_spectrum(R=1.0, c=1.0, sigma=1.0, count=5):
    # Continuum surface-operator eigenvalues for V^(k) = -c sigma^2 exp(-sigma^2 k^2 / 2)
    # on the circle of radius R: E_m = -c sigma^2 R \int exp(-sigma^2 R^2 (1 - cos t)) e^{-imt} dt.
    a = sigma**2 * R**2
    return [-c * sigma**2 * 2 * np.pi * R * np.exp(-a) * special.iv(m, a) for m in range(count)]


def rashba_circle_spectrum(M=64, alpha=1.0, c=1.0, sigma=1.0):
    R = abs(alpha) / 2
    th = 2 * np.pi * np.arange(M) / M
    s = R * np.stack([np.cos(th), np.sin(th)], axis=1)
    w = 2 * np.pi * R / M
    a = alpha * (s[:, 1] + 1j * s[:, 0])
    u = np.stack([np.full(M, 1 / np.sqrt(2)), -np.conj(a) / np.abs(a) / np.sqrt(2)], axis=1)
    d = s[:, None, :] - s[None, :, :]
    k2 = (d**2).sum(-1)
    vhat = -c * sigma**2 * np.exp(-sigma**2 * k2 / 2)
    overlap = np.conj(u) @ u.T
    A = w * vhat * overlap
    dense = np.sort(np.linalg.eigvalsh(A))
    # Circulant route: c_m from the scalar kernel, then (c_m + c_{m+1}) / 2.
    row = w * vhat[0]
    cm = np.array([np.sum(row * np.exp(-1j * m * th)).real for m in range(M)])
    circ = np.sort((cm + np.roll(cm, -1)) / 2)
    return dense, circ


if __name__ == "__main__":
    v, e = ball_well_2d_at_unit_k()
    print(f"ball-well n=2 c=1 R=1 |k|=1: {v:.16e} (quadrature error {e:.1e}); -J1(1) = {-special.j1(1.0):.16e}")
    print("gaussian circle E_m, m=0..4:", ", ".join(f"{x:.16e}" for x in gaussian_circle_spectrum()))
    dense, circ = rashba_circle_spectrum()
    print("rashba M=64 max |dense - circulant| =", np.max(np.abs(dense - circ)))
    print("rashba M=64 lowest 8:", ", ".join(f"{x:.16e}" for x in dense[:8]))
    print("rashba M=64 highest:", f"{dense[-1]:.3e}")
