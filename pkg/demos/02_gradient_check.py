"""Compare the hand-written backward pass with central finite differences,
parameter by parameter, on a deliberately tiny model."""

from emogru.gradcheck import TINY, gradient_check

print("tiny model:", TINY)
worst, per_param = gradient_check(seed=0)
for name, err in per_param.items():
    print(f"  {name:<14s} {err:.2e}")
print(f"max relative error {worst:.2e} ({'ok' if worst < 1e-4 else 'TOO LARGE'})")
