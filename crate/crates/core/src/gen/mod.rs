//! Instance generators for vertex cover, tree augmentation and Carr-Vempala points.

pub mod cv;
pub mod tap;
pub mod vc;

pub use cv::{cv_points, enumerate_cv, gen_cv, CvEnumeration, CvInstance};
pub use tap::{gen_tap, TapInstance};
pub use vc::{gen_vc, random_graph, read_pace};
