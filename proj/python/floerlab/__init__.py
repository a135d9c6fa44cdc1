"""Python bindings for the floerlab spectral-Galerkin toolkit.

The heavy lifting lives in the compiled ``_floerlab`` module; this package
re-exports its public names.  The extension is looked up inside the package
first (installed wheel layout) and on ``sys.path`` second (development
layout with the build directory on ``PYTHONPATH``).
"""

try:
    from . import _floerlab as _ext
except ImportError:  # development layout
    import _floerlab as _ext

CouplingSpec = _ext.CouplingSpec
ModeSet = _ext.ModeSet
ModelKind = _ext.ModelKind
ModelSpec = _ext.ModelSpec
Orbit = _ext.Orbit
OrbitContext = _ext.OrbitContext
admissibility_profile = _ext.admissibility_profile
build_lattice = _ext.build_lattice
loop_norms = _ext.loop_norms
make_context = _ext.make_context
newton_orbit = _ext.newton_orbit
small_divisor = _ext.small_divisor
verify_inclusions = _ext.verify_inclusions
verify_isometry = _ext.verify_isometry

__all__ = [
    "CouplingSpec",
    "ModeSet",
    "ModelKind",
    "ModelSpec",
    "Orbit",
    "OrbitContext",
    "admissibility_profile",
    "build_lattice",
    "loop_norms",
    "make_context",
    "newton_orbit",
    "small_divisor",
    "verify_inclusions",
    "verify_isometry",
]
