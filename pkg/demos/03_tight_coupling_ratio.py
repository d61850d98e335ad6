"""Where does a colinear array cancel its own reactance?

Under uniform excitation every element of a colinear array sees its own
capacitive Chu reactance plus the mutual reactances of all neighbours.
The spacing-to-radius ratio at which the two cancel is the tight-coupling
ratio. For an infinite array with very small electrical spacing it tends
to (6 zeta(3))^(1/3).

Run: python demos/03_tight_coupling_ratio.py
"""

from tcmimo import asymptotic_ratio, colinear_reactance_residual, tight_coupling_root, zeta3

print(f"zeta(3) = {zeta3():.15f}")
print(f"(6 zeta(3))^(1/3) = {asymptotic_ratio():.10f}\n")

x = 1e-3
print(f"normalized reactance of an infinite array at k0*delta = {x}")
for ratio in (1.5, 1.8, 1.9, asymptotic_ratio(), 2.0, 2.5, 3.0):
    print(f"  ratio {ratio:7.4f}: {colinear_reactance_residual(ratio, x):+.4e}")

# Crowding the elements (small ratio) makes the net reactance inductive;
# spreading them leaves it capacitive. The zero crossing is the optimum.

print("\nroot for finite arrays (k0*delta = 1e-6)")
for n in (2, 4, 8, 16, 64, 256, 1024):
    print(f"  N = {n:5d}: {tight_coupling_root(1e-6, n):.6f}")
print("Each element gains neighbours on both sides, so the root climbs toward the limit from below.")
print("A root below 2 means neighbouring Chu spheres overlap: the coupling model is then an approximation.")
