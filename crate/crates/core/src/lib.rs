//! Symbolic-numeric engine for the Shehu integral transform
//!
//! `V(s, u) = ∫₀^∞ e^{-st/u} v(t) dt`
//!
//! Images are handled in the homogenized variable `r = s/u`, in which every
//! image of the atom algebra is a Laplace image evaluated at `r`. Exact
//! arithmetic runs over `Q(π)`; floating point only appears in evaluation and
//! in the numerical oracle.

pub mod coeff;
pub mod error;
pub mod expr;
pub mod image;
pub mod inverse;
pub mod oracle;
pub mod poly;
pub mod ratfunc;
pub mod solvers;
pub mod special_fn;
pub mod table;
pub mod transform;

pub use coeff::{Coeff, Rational};
pub use error::{Error, Result};
pub use expr::{canonicalize, differentiate, equivalent, evaluate, parse, Atom, AtomSum, Bindings, Expr, Var};
pub use image::{ImageForm, Target};
pub use inverse::{factor_denominator, invert, normalize_image, partial_fractions, PartialFractionTerm, RationalR};
pub use poly::{Poly, PolyR};
pub use ratfunc::RatFunc;
pub use transform::{
    change_of_scale, convert, derivative_image, exponential_order, transform, transform_expr, transform_special, Abscissa,
    GrowthBound, TransformImage,
};
pub use oracle::{numeric_forward, numeric_invert, verify_pair, PairSpec, QuadratureSpec, TalbotSpec, VerificationReport};
pub use solvers::{residual, solve_ivp, solve_pde, IVProblem, ModalPDEProblem, PdeKind, Problem, SineSeries, Solution};
pub use table::{load_table, verify_table, verify_table_with, Erratum, TableEntry, TableReport};
