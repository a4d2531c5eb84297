//! Exact integer linear algebra: Smith normal form, finitely generated abelian
//! groups in diagonal form, and homology of complexes of such groups.

mod complex;
mod group;
mod matrix;
mod scalar;
mod snf;

pub use complex::{homology_ab, induced_map, unit_vector, AbComplex, ChainMap, ComplexError, HomologyGroup};
pub use group::{
    cokernel, ext1_ab, hom_ab, homology_at, image, kernel, present, quotient, subgroup, subquotient, tensor_ab, Canonical,
    FgAbGroup, GroupHom, HomError, Lattice, Presented, Subquotient,
};
pub use matrix::{IntMatrix, Matrix};
pub use scalar::{modulo, Overflow, Scalar};
pub use snf::{
    column_echelon, invariant_factors, kernel_basis, smith_normal_form, smith_rows, solve_integer, ColumnEchelon, SmithForm,
};
