"""Diagnose the CN-vs-Born difference scaling."""
import numpy as np

from pseudoherm import dynamics, models
from pseudoherm.models import GridSpec
from pseudoherm.weyl import WeylSymbol

grid3 = GridSpec(-40.0, 40.0, 2048)
xs3 = grid3.coordinates()
psi3 = np.exp(-(xs3**2) / (2 * 2.0**2)).astype(complex)
psi3 /= np.sqrt(np.sum(np.abs(psi3) ** 2) * grid3.step)
pulse0 = dynamics.Pulse(E0=0.0, omega=1.0, tau=10.0)
tq = 1.5
h = grid3.step


def l2(v):
    return np.sqrt(np.sum(np.abs(v) ** 2) * h)


def split_step_exact(lam, dt=5e-4):
    """Strang split-step reference on the same FFT grid."""
    k = 2 * np.pi * np.fft.fftfreq(grid3.points, d=h)
    n = int(round(tq / dt))
    dt = tq / n
    half_v = np.exp(-0.5j * lam * xs3**2 * dt)
    kin = np.exp(-0.5j * k * k * dt)
    psi = psi3.copy()
    for _ in range(n):
        psi = half_v * np.fft.ifft(kin * np.fft.fft(half_v * psi))
    return psi


# floor at lam = 0
h0f = WeylSymbol.p(2) * 0.5
cn0 = dynamics.crank_nicolson_propagate(h0f, pulse0, grid3, psi3, 1e-3, tq)
sf0 = dynamics.first_order_strong_field(psi3, np.zeros_like(xs3), pulse0, grid3, tq, n_quad=128)
print(f"lam=0 floor: {l2(cn0 - sf0):.3e}")

for lam in (0.2, 0.1, 0.05):
    h0 = WeylSymbol.p(2) * 0.5 + WeylSymbol.x(2) * lam
    cn = dynamics.crank_nicolson_propagate(h0, pulse0, grid3, psi3, 1e-3, tq)
    sf = dynamics.first_order_strong_field(psi3, lam * xs3**2, pulse0, grid3, tq, n_quad=128)
    ex = split_step_exact(lam)
    print(
        f"lam={lam}: cn-vs-sf {l2(cn - sf):.3e}  exact-vs-sf {l2(ex - sf):.3e}  "
        f"cn-vs-exact {l2(cn - ex):.3e}"
    )
