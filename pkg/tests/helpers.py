"""Shared fixtures: self-map descriptions and small-instance generators."""

from unifree.funcgraph import (
    OMEGA,
    FiniteCore,
    Natural,
    Periodic,
    SelfMapDescription,
    ZChain,
    nu_description,
)

RAY = Natural(Periodic.constant(1))
HAIRY = Natural(Periodic.constant(2))
LOOP = FiniteCore((0,))
TWO_CYCLE = FiniteCore((1, 0))
BARE_Z = ZChain()
HAIRY_Z = ZChain(Periodic((), (((),),)), ((),))


def _d(components=(), families=()):
    return SelfMapDescription(tuple(components), tuple(families))


# name -> (description, expected universal)
DESCRIPTIONS = {
    "nu": (nu_description(), True),
    "single_ray": (_d([RAY]), False),
    "three_rays": (_d(families=[(RAY, 3)]), False),
    "omega_loops": (_d(families=[(LOOP, OMEGA)]), False),
    "omega_two_cycles": (_d(families=[(TWO_CYCLE, OMEGA)]), False),
    "omega_rho": (_d(families=[(FiniteCore((1, 2, 0, 0)), OMEGA)]), False),
    "nu_plus_loop": (_d([LOOP], [(RAY, OMEGA)]), False),
    "nu_plus_three_loops": (_d([LOOP, LOOP, LOOP], [(RAY, OMEGA)]), False),
    "nu_plus_two_cycle": (_d([TWO_CYCLE], [(RAY, OMEGA)]), False),
    "nu_plus_zchain": (_d([BARE_Z], [(RAY, OMEGA)]), False),
    "nu_plus_omega_zchains": (_d(families=[(RAY, OMEGA), (BARE_Z, OMEGA)]), False),
    "omega_zchains": (_d(families=[(BARE_Z, OMEGA)]), False),
    "single_zchain": (_d([BARE_Z]), False),
    "omega_hairy_zchains": (_d(families=[(HAIRY_Z, OMEGA)]), False),
    "zchain_with_below_pattern": (_d(families=[(ZChain(Periodic.constant(()), ((), ((),))), OMEGA)]), False),
    "omega_hairy_rays": (_d(families=[(HAIRY, OMEGA)]), True),
    "nu_plus_hairy": (_d(families=[(RAY, OMEGA), (HAIRY, OMEGA)]), True),
    "ray_with_preperiod": (_d(families=[(Natural(Periodic((3, 2), (1,))), OMEGA)]), True),
    "alternating_levels": (_d(families=[(Natural(Periodic((), (1, 2))), OMEGA)]), True),
    "twisted_parents": (
        _d(families=[(Natural(Periodic.constant(2), Periodic.constant((1, 1))), OMEGA)]),
        True,
    ),
    "nu_plus_finite_rays": (_d([RAY, HAIRY], [(RAY, OMEGA)]), True),
    "finite_mixture": (_d([RAY, HAIRY, LOOP]), False),
}
