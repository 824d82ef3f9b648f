"""
The filtration of the real complex
==================================

The real complex carries a filtration whose graded pieces are the complexes
C_q reduced mod 2.  Its spectral sequence converges to the real Betti
numbers; when it degenerates at E_1 the curve is maximal.
"""

from realdegen import catalog
from realdegen.complexes import spectral_sequence
from realdegen.main_complexes import augmentation_filtration, build_real_complex

for name in ("elliptic-cycle-3-untwisted", "elliptic-cycle-3-twisted"):
    sdd = catalog.get_sdd(name)
    f = augmentation_filtration(sdd, build_real_complex(sdd))
    print(name)
    print("  graded dims (level, degree):", f.graded_dims())
    for page in spectral_sequence(f):
        tag = " (E_infinity)" if page.stable else ""
        print(f"  E_{page.r}{tag}: {page.nonzero()}")
