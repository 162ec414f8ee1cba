//! Exact multivariate polynomial algebra and the symbolic machinery built
//! on it: bideterminants with SSYT straightening, the depth-two
//! differential operator kernels Q_l with their pluriharmonicity and
//! equivariance checks, and the delta-calculus used to evaluate the
//! operators on automorphy factors.

mod bidet;
mod delta;
mod poly;
mod ql;

pub use bidet::{bideterminant, ssyt_basis_size, ssyt_tableaux, straighten, straighten_poly, ColumnPair, Straightened};
pub use delta::{
    action_on_delta, c_basis, constant_c0_rho2, constant_cr, verify_fundamental_table,
    verify_product_lemmas, CValue, DeltaExpr, TableReport,
};
pub use poly::{var, var_name, MultiPoly};
pub use ql::{
    equivariance_check, pluriharmonic_check, pluriharmonic_check_poly, ql_closed_form_abstract,
    ql_generating_series, ql_kernel, ql_kernel_at, Weight,
};
pub use ql::{u_entry as ql_u_entry, v_entry as ql_v_entry};
