pub mod certificate;
pub mod domtoip;
pub mod ec2;
pub mod error;
pub mod fdt;
pub mod gen;
pub mod graph;
pub mod harness;
pub mod lp;
pub mod model;
pub mod scalar;

pub use certificate::{verify_certificate, Certificate, VerifyReport};
pub use error::{FdtError, Result};
pub use model::{IpInstance, VarKind};
pub use scalar::{Mode, Rational, Scalar};
