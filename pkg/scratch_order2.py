"""Scaling order with both potential signs; freeze the acceptance xi set."""
import numpy as np

from pseudoherm import dynamics, models
from pseudoherm.models import GridSpec, SpikedHOModel
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


for sign in (+1.0, -1.0):
    diffs = []
    lams = (0.05, 0.025, 0.0125)
    for lam in lams:
        h0 = WeylSymbol.p(2) * 0.5 + WeylSymbol.x(2) * (sign * lam)
        cn = dynamics.crank_nicolson_propagate(h0, pulse0, grid3, psi3, 1.5e-3, tq)
        sf = dynamics.first_order_strong_field(
            psi3, sign * lam * xs3**2, pulse0, grid3, tq, n_quad=128
        )
        diffs.append(l2(cn - sf))
    orders = [float(np.log2(diffs[i] / diffs[i + 1])) for i in range(2)]
    print(f"sign {sign:+.0f}: diffs {[f'{d:.4e}' for d in diffs]} orders {orders}")

# acceptance xi set with the (3 <- 2) sweep direction
model = SpikedHOModel(lam=0.5, alpha=0.2)
curves = dynamics.transition_sweep(
    model, 3, 2, 0.005, 1.5, 2.5, 200, 20 * np.pi, [0.0, 1.0, 4.0, 8.0]
)
for c in curves:
    i = int(np.argmax(c.probability))
    print(f"xi={c.xi}: peak {c.omega[i]:.6f} maxP {max(c.probability):.6f}")
grid_step = (2.5 - 1.5) / 199
print("omega grid step:", grid_step)
