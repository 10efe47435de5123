"""Two families of Yang-Baxter gates and where they sit in the Weyl chamber."""
import numpy as np

from ybgate import gates, weyl

np.set_printoptions(precision=3, suppress=True)

# family I is a real rotation mixing |00>,|11> and |01>,|10>
print(gates.r1(np.pi / 8).real)

# family II mixes identity and SWAP
print(gates.r2(np.pi / 8))

# nonlocal coordinates: family I runs along the base edge, family II along the diagonal
for x in (np.pi / 8, np.pi / 4, 3 * np.pi / 8):
    print(f"{x:.3f}", weyl.nonlocal_params(gates.r1(x)), weyl.nonlocal_params(gates.r2(x)))

# entangling power peaks at pi/4 for both
xs = np.linspace(0, np.pi / 2, 9)
print([round(weyl.entangling_power(gates.r1(x)), 4) for x in xs])
print([round(weyl.entangling_power(gates.r2(x)), 4) for x in xs])

# Monte-Carlo estimate over Haar product states agrees with the closed form
mc, err = weyl.entangling_power_montecarlo(gates.r1(np.pi / 4), 100_000, seed=1, return_stderr=True)
print(f"MC {mc:.4f} +- {err:.4f}   exact {2 / 9:.4f}")

# only the pi/4 points are perfect entanglers
print([round(float(x), 4) for x in xs if weyl.is_perfect_entangler(gates.r1(x))])

# r1 needs two CNOTs (one at pi/4), r2 needs three
print(weyl.min_cnot_count(gates.r1(0.3)), weyl.min_cnot_count(gates.r1(np.pi / 4)),
      weyl.min_cnot_count(gates.r2(0.3)))
