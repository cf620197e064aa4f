pub mod linalg;
pub mod antilinear;
pub mod blockdiag;
pub mod symmetry;
pub mod certify;
pub mod scattering;
pub mod model;
pub mod formats;
pub mod parallel;
pub mod sweep;
pub mod ensemble;
