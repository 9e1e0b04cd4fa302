"""Session-level cache of verified extension builds shared across test modules.

Every build proves its operator identities symbolically, which is the
expensive part; the specs are immutable, so caching them is safe and keeps
the suite fast.
"""

from functools import lru_cache

from eopsusy.extensions import (
    ExtensionFamily,
    build_hermite_extension,
    build_laguerre2_extension,
    build_laguerre_extension,
)


@lru_cache(maxsize=None)
def hermite_ext(m):
    return build_hermite_extension(m)


@lru_cache(maxsize=None)
def laguerre_ext(case_value, l, m):
    return build_laguerre_extension(ExtensionFamily(case_value), l, m)


@lru_cache(maxsize=None)
def laguerre2_ext(l, m1, m2):
    return build_laguerre2_extension(l, m1, m2)


@lru_cache(maxsize=None)
def system_for(case, params_items):
    from eopsusy.superalg import build_system

    return build_system(case, dict(params_items))


@lru_cache(maxsize=None)
def report_for(case, params_items, pmax=25):
    from eopsusy.superalg import enumerate_reps, structure_function

    system = system_for(case, params_items)
    return (enumerate_reps(structure_function(system), system.spectrum(),
                           p_max=pmax), system)
