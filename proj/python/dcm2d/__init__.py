"""2D discontinuous cell method: dual-mesh elasticity, cohesive fracture and
explicit dynamics, backed by the C++ core."""

from ._core import (
    DcmError,
    cantilever_convergence,
    damage,
    generate_preset,
    material_derived,
    mesh_info,
    notched_tension,
    patch_test,
    preset_names,
    run_config_text,
    spectral_study,
)

__all__ = [
    "DcmError",
    "cantilever_convergence",
    "damage",
    "generate_preset",
    "material_derived",
    "mesh_info",
    "notched_tension",
    "patch_test",
    "preset_names",
    "run_config_text",
    "spectral_study",
]
