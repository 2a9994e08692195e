"""Validate solver values by seeded simulation of the exact dynamics.

The cost-to-go J(B, V) is an expectation over random service outcomes; here
we replay the system under the computed optimal policy and check that the
sample average lands within the Monte Carlo error band.
"""

from decayq import mc_estimate, simulate_episode, solve_recursive, validate
from decayq.presets import preset_by_id

model = validate(preset_by_id("1a").config)
solution = solve_recursive(model)
policy = solution.policy()

# --- one episode, step by step ---------------------------------------------
traj = simulate_episode(model, policy, (20, 10), seed=42)
print(f"one episode: {len(traj)} slots, total cost {traj.total_cost:.4f}")
for t, s in enumerate(traj.steps[:6]):
    print(f"  t={t}: state={s.state} s_idx={s.action_index} "
          f"w={s.w:.3f} cost={s.stage_cost:+.3f} {s.event.value}")
print("  ...")
assert len(traj) <= model.B * model.V  # every episode ends within B*V slots

# --- the same episode replays bit-exactly ----------------------------------
again = simulate_episode(model, policy, (20, 10), seed=42)
assert traj == again
print("replay with the same seed is bit-identical")

# --- sample mean vs solver value -------------------------------------------
for n in (1_000, 10_000, 100_000):
    est = mc_estimate(model, policy, (20, 10), n, seed=0)
    z = abs(est.mean - solution.J[20, 10]) / est.std_error
    print(f"n={n:>7,}: mean {est.mean:9.4f}  +/- {est.std_error:.4f}  "
          f"(J = {solution.J[20, 10]:.4f}, z = {z:.2f})")
