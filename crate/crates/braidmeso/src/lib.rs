//! Exact computation in the 4-string braid group and its central quotient:
//! Garside normal forms, Cayley-ball scans for convolution inequalities, the
//! link graphs of the Brady complex, and construction of certified flat-disk
//! families witnessing exponential mesoscopic rank.

pub mod ball;
pub mod band;
pub mod brady;
pub mod conv;
pub mod embed;
pub mod error;
pub mod flats;
pub mod garside;
pub mod geom;
pub mod group;
pub mod linkgraph;
pub mod meso;
pub mod opnorm;
pub mod perm;
pub mod quotient;
pub mod scan;
