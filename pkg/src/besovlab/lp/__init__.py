"""Littlewood-Paley machinery on periodic grids."""

from .grid import (
    Field,
    Grid,
    VectorField,
    advect,
    curl,
    dealias,
    divergence,
    dot,
    gradient_tensor,
    lp_norm,
    make_grid,
    multiply,
    partial,
    read_field,
    scale_by,
    spectral_gradient,
    write_field,
)
from .partition import (
    BesovSpec,
    DyadicPartition,
    besov_from_blocks,
    besov_norm,
    block_l2_norms,
    block_lp_norms,
    blocks,
    build_partition,
    chi,
    commutator_block,
    dyadic_block,
    low_cutoff,
    modified_block,
    paraproduct,
    partition_report,
    phi,
    remainder,
    smooth_step,
)
