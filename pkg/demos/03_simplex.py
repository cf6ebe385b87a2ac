"""The simplex minimizer on the Rosenbrock valley.

The callback sees every simplex, so we can follow the best vertex as it
crawls along the curved valley floor toward (1, 1).
"""
import numpy as np

from swdknn import nelder_mead


def rosenbrock(p):
    x, y = p
    return (1 - x) ** 2 + 100 * (y - x * x) ** 2


trail = []
res = nelder_mead(rosenbrock, [-1.2, 1.0], callback=lambda it, sim, fv: trail.append(sim[0].copy()))

print(f"converged={res.converged} after {res.iterations} iterations, {res.n_evals} evaluations")
print("minimum at", res.x_min, "f =", res.f_min)
for it in range(0, len(trail), 15):
    print(f"  iteration {it:>3}: best vertex {np.round(trail[it], 4)}")

# the best value never increases
h = np.array(res.best_history)
print("monotone best values:", bool(np.all(np.diff(h) <= 0)))
