"""Scratch: models + dynamics oracle validation and frozen-value capture."""
import time

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad
from scipy.special import eval_genlaguerre

from pseudoherm import dynamics, models, weyl
from pseudoherm.models import GridSpec, SpikedHOModel
from pseudoherm.weyl import WeylSymbol

t0 = time.perf_counter()

# 1. Laguerre recurrence vs scipy
model = SpikedHOModel(lam=0.5, alpha=0.2)
rng = np.random.default_rng(11)
xs = rng.uniform(0.05, 4.0, size=40)
worst = 0.0
for n in range(8):
    for x in xs:
        u = model.lam * x * x
        mine = models._genlaguerre(n, model.alpha, u)
        ref = eval_genlaguerre(n, model.alpha, u)
        worst = max(worst, abs(mine - ref) / max(1.0, abs(ref)))
print(f"genlaguerre vs scipy worst rel err {worst:.2e}")

# 2. orthonormality by quadrature
for n in range(4):
    for m in range(n, 4):
        val, err = quad(
            lambda x: models.spiked_wavefunction(model, n, x)
            * models.spiked_wavefunction(model, m, x),
            0.0,
            np.inf,
        )
        target = 1.0 if n == m else 0.0
        assert abs(val - target) < 1e-9, (n, m, val)
print("orthonormality OK")

# 3. eigen-residual via 4th-order FD
def eig_residual(n):
    h = 1e-3
    xs = np.linspace(0.2, 7.0, 300)
    phi = lambda x: models.spiked_wavefunction(model, n, x)
    d2 = (
        -phi(xs + 2 * h) + 16 * phi(xs + h) - 30 * phi(xs) + 16 * phi(xs - h) - phi(xs - 2 * h)
    ) / (12 * h * h)
    lam, al = model.lam, model.alpha
    v = lam * lam * xs**2 + (al * al - 0.25) / xs**2
    r = -d2 + v * phi(xs) - models.spiked_energy(model, n) * phi(xs)
    return np.max(np.abs(r))

for n in range(4):
    print(f"eig residual n={n}: {eig_residual(n):.2e}")

# 4. dense vs banded eigensolver (p^2 and p^4 cases)
from scipy.linalg import eigh

grid = GridSpec(-6.0, 6.0, 160)
ho = WeylSymbol.p(2) + WeylSymbol.x(2)
band = models.banded_hamiltonian(ho, grid)
print("band shape:", band.shape)
xs_g = grid.coordinates()
h_ = grid.step
N = grid.points
dense = np.zeros((N, N))
# second difference for p^2
for i in range(N):
    dense[i, i] = 2.0 / h_**2 + xs_g[i] ** 2
    if i + 1 < N:
        dense[i, i + 1] = dense[i + 1, i] = -1.0 / h_**2
evals_dense = np.linalg.eigvalsh(dense)[:5]
es = models.hermitian_spectrum(ho, grid, 5)
print("dense vs banded:", np.max(np.abs(evals_dense - es.eigenvalues)))

# p^4 case: h = p^4 + x^2
quart = WeylSymbol.p(4) + WeylSymbol.x(2)
es4 = models.hermitian_spectrum(quart, grid, 4)
dense4 = np.zeros((N, N))
c = 1.0 / h_**4
for i in range(N):
    dense4[i, i] = 6.0 * c + xs_g[i] ** 2
    if i + 1 < N:
        dense4[i, i + 1] = dense4[i + 1, i] = -4.0 * c
    if i + 2 < N:
        dense4[i, i + 2] = dense4[i + 2, i] = 1.0 * c
evals4 = np.linalg.eigvalsh(dense4)[:4]
print("p4 dense vs banded:", np.max(np.abs(evals4 - es4.eigenvalues)))

# 5. matrix elements frozen values
X23 = models.spiked_matrix_element(model, "position", 2, 3)
I23 = models.spiked_matrix_element(model, "momentum", 2, 3)
M23 = models.spiked_matrix_element(model, "mapped_position", 2, 3)
print("X23:", repr(X23), "I23:", repr(I23), "mapped xi=0:", repr(M23))
m8 = SpikedHOModel(lam=0.5, alpha=0.2, xi=8.0)
M23_8 = models.spiked_matrix_element(m8, "mapped_position", 2, 3)
print("mapped xi=8:", repr(M23_8), "ratio:", M23_8 / X23)

# 6. first-order amplitude vs independent quadrature oracle
pulse = dynamics.Pulse(E0=0.005, omega=1.8, tau=15 * np.pi)
tt = float(pulse.tau)
delta = models.spiked_energy(model, 3) - models.spiked_energy(model, 2)
re_part, _ = quad(lambda s: np.cos(delta * s) * dynamics.field_value(pulse, s), 0, tt, limit=400)
im_part, _ = quad(lambda s: np.sin(delta * s) * dynamics.field_value(pulse, s), 0, tt, limit=400)
osc = complex(re_part, im_part)
amp_oracle = abs(-1j * X23 * osc) ** 2
p_lib = dynamics.first_order_transition(model, 3, 2, pulse, tt)
print(f"first-order P lib {p_lib:.10e} oracle {amp_oracle:.10e} rel {abs(p_lib-amp_oracle)/amp_oracle:.2e}")

# 7. sweep frozen values (tau = 20*pi, 1.5:2.5:200)
t1 = time.perf_counter()
curves = dynamics.transition_sweep(
    model, 3, 2, 0.005, 1.5, 2.5, 200, 20 * np.pi, [0.0, 0.5, 1.0, 8.0]
)
t2 = time.perf_counter()
for c in curves:
    i = int(np.argmax(c.probability))
    print(
        f"xi={c.xi}: peak omega {c.omega[i]:.6f} maxP {np.max(c.probability):.6f}"
    )
print(f"sweep time {t2 - t1:.2f}s")

# 8. Born vs Dyson-with-free-propagators oracle (E0 = 0)
grid2 = GridSpec(-40.0, 40.0, 512)
xs2 = grid2.coordinates()
sigma = 1.5
psi0 = np.exp(-(xs2**2) / (2 * sigma**2)).astype(complex)
psi0 /= np.sqrt(np.sum(np.abs(psi0) ** 2) * grid2.step)
V = -0.5 * np.exp(-(xs2**2) / 4.0)
pulse0 = dynamics.Pulse(E0=0.0, omega=1.0, tau=10.0)
tfin = 1.5

born = dynamics.first_order_strong_field(psi0, V, pulse0, grid2, tfin, n_quad=256)

# oracle: dense free propagator from the DFT matrix, Gauss-Legendre Dyson integral
k = 2 * np.pi * np.fft.fftfreq(grid2.points, d=grid2.step)
F = np.fft.fft(np.eye(grid2.points), axis=0)
Finv = np.conj(F).T / grid2.points

def ufree(dt):
    return Finv @ (np.exp(-0.5j * k * k * dt)[:, None] * F)

nodes, wts = leggauss(48)
s_nodes = 0.5 * tfin * (nodes + 1.0)
s_wts = 0.5 * tfin * wts
acc = ufree(tfin) @ psi0
corr = np.zeros_like(acc)
for s, w in zip(s_nodes, s_wts):
    corr += w * (ufree(tfin - s) @ (V * (ufree(s) @ psi0)))
oracle_psi = acc - 1j * corr
err = np.sqrt(np.sum(np.abs(born - oracle_psi) ** 2) * grid2.step)
print(f"Born vs Dyson oracle L2 err {err:.2e}")

# 9. CN-vs-Born scaling order with harmonic V
grid3 = GridSpec(-40.0, 40.0, 2048)
xs3 = grid3.coordinates()
psi3 = np.exp(-(xs3**2) / (2 * 2.0**2)).astype(complex)
psi3 /= np.sqrt(np.sum(np.abs(psi3) ** 2) * grid3.step)
tq = 1.5
diffs = []
for lam in (0.2, 0.1, 0.05):
    h0 = WeylSymbol.p(2) * 0.5 + WeylSymbol.x(2) * lam
    cn = dynamics.crank_nicolson_propagate(h0, pulse0, grid3, psi3, 1e-3, tq)
    sf = dynamics.first_order_strong_field(psi3, lam * xs3**2, pulse0, grid3, tq, n_quad=128)
    d = np.sqrt(np.sum(np.abs(cn - sf) ** 2) * grid3.step)
    diffs.append(d)
    print(f"lam={lam}: diff {d:.3e}")
orders = [np.log2(diffs[i] / diffs[i + 1]) for i in range(2)]
print("observed orders:", orders)

print(f"total scratch time {time.perf_counter() - t0:.1f}s")
