"""Compare the row-sparse ADMM solver with three standard baselines.

SOMP picks rows greedily, SNIHT runs normalized iterative hard
thresholding, and the l2,1 ADMM solves the convex group-lasso relaxation.
All four see the same instances; success means rmse below 1e-5.
"""

from jointsparse import InstanceSpec, generate, rmse
from jointsparse.bench.solvers import run_solver

names = ["admm_l20", "admm_l21", "somp", "sniht"]
trials = 10
K = 75

wins = dict.fromkeys(names, 0)
for seed in range(trials):
    inst = generate(InstanceSpec(N=500, M=150, K=K, J=10, seed=seed))
    for name in names:
        res = run_solver(name, inst, {}, seed)
        wins[name] += rmse(res.S_hat, inst.S_true) < 1e-5

print(f"success over {trials} instances at K={K}:")
for name in names:
    print(f"  {name:>9}: {wins[name] / trials:.2f}")
