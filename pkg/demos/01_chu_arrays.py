"""Chu elements and the impedance of a coupled array.

A Chu antenna is the widest-band antenna that fits in a sphere of radius
``a``. Its impedance is that of a small RLC ladder: nearly a pure
capacitor when the sphere is electrically small (``k0 a << 1``) and a
matched resistor ``R`` when it is large. Packing elements close together
adds mutual impedances whose strength depends on the spacing and on the
element orientation.

Run: python demos/01_chu_arrays.py
"""

import numpy as np

from tcmimo import COLINEAR, PARALLEL, ArrayGeometry, ChuElement, array_impedance, mutual_impedance, self_impedance

C0 = 299792458.0

# One element of radius 2.6 mm, the default size for a 5 mm spacing.
element = ChuElement(radius_a=0.005 / 1.9320814273)
print(f"element radius {1e3 * element.radius_a:.3f} mm, R = {element.resistance_R} ohm\n")

print("self impedance over frequency")
print("    f [GHz]    k0 a      Re Z [ohm]     Im Z [ohm]")
for f in (0.1e9, 0.7e9, 2.5e9, 10e9, 25e9):
    z = self_impedance(element, f)
    print(f"{f / 1e9:10.2f} {element.ka(f):8.4f} {z.real:14.5f} {z.imag:14.3f}")

# The radiation resistance grows as (k0 a)^2 at low frequency, which is
# why small isolated antennas are narrowband.

print("\nmutual impedance between two elements at 2.5 GHz")
print("    d / a    colinear [ohm]            parallel [ohm]")
for ratio in (2.0, 4.0, 8.0, 16.0):
    d = ratio * element.radius_a
    zc = mutual_impedance(element, element, d, COLINEAR.beta, COLINEAR.gamma, 2.5e9)
    zp = mutual_impedance(element, element, d, PARALLEL.beta, PARALLEL.gamma, 2.5e9)
    print(f"{ratio:9.1f}   {complex(zc):24.4f}  {complex(zp):24.4f}")

# Colinear pairs couple through the near-field 1/(k0 d)^3 term, so their
# mutual reactance is large and of opposite sign to the self reactance.

array = ArrayGeometry(4, 0.005, COLINEAR, element)
z = array_impedance(array, 2.5e9)
print("\n4-element colinear array at 2.5 GHz: |Z| [ohm]")
print(np.array2string(np.abs(z.entries), precision=2, suppress_small=True))
print(f"symmetric: {z.is_symmetric()}, Toeplitz: {z.is_toeplitz()}")
print("eigenvalues of Re Z:", np.array2string(np.linalg.eigvalsh(z.real), precision=4))
print("A tightly coupled array radiates through few collective modes, so Re Z is nearly rank deficient.")
