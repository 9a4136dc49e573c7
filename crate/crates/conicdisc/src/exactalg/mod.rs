//! Exact coefficient arithmetic: scalar fields, polynomials, truncated
//! power series and 3x3 matrices.

pub mod expr;
pub mod field;
pub mod matrix;
pub mod poly;
pub mod ring;
pub mod series;

pub use expr::{parse_poly, ExprError};
pub use field::{field_sqrt, solve_quadratic_char2, Elem, Embedding, Field, FieldSpec, Scalar};
pub use matrix::{decompose_gl3, product, Axis, ElementaryMove, Mat3};
pub use poly::Poly;
pub use ring::Ring;
pub use series::{
    hensel_factor_quadratic, hensel_sqrt, series_invert, series_valuation, Series, Valuation,
};

/// `poly_pth_root` from the library surface.
pub fn poly_pth_root(f: &Poly) -> Option<Poly> {
    f.pth_root()
}
