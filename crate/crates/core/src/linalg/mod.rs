//! Exact dense linear algebra over cyclotomic fields, and integer Smith
//! normal form with kernels over finite abelian groups.

mod dense;
mod smith;

pub use dense::{nullspace, rank, rref, Matrix, Rref};
pub use smith::{
    apply_mod, smith_normal_form, solve_mod, AbelianGroup, IntMatrix, KernelGenerator, ModKernel,
    Smith,
};
