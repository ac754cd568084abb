//! Upper limits on the number of bound states of the spinless Salpeter
//! equation `[alpha sqrt(p^2 + m^2) + V] psi = M psi` for central potentials,
//! plus a variational eigensolver that supplies exact reference values.

// `!(x > 0.0)` rejects NaN together with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod numerics;
pub mod potentials;
pub mod kernels;
pub mod bounds;
pub mod solver;
pub mod reference;
