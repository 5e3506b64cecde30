//! Root systems, affine Weyl groups, alcoves and the extension of fractal
//! functions from an alcove to the whole space.

mod action;
mod extend;
mod roots;
mod tessellate;

pub use action::{
    group_closure, map_key, rank2_catalog, AffineWeylAction, CatalogDump, FoldableFigure, Wall, WeylWord,
    CATALOG_NAMES, FOLD_CAP,
};
pub use extend::{extend_function, ExtendedFunction};
pub use roots::{
    affine_reflect, cartan_integer, coroot, dot, reflect, reflection_matrix, AffineReflectionSpec, AngleClass,
    RootSystemData, RootSystemReport, INTEGRALITY_TOL,
};
pub use tessellate::{tessellate, Region, Tessellation, TessellationCell};
