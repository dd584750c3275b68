//! Exact and parameterized algorithms for L(p,q)-labeling.
//!
//! Three independent tracks compute `λ_{p,q}` and a witness labeling:
//! branch-and-bound over `G` ([`exact`]), dynamic programming over a nice tree
//! decomposition of `G²` ([`dp`]), and for `q = 1` a twin-cover search with a
//! small integer program ([`tc`]). [`l11`] reduces L(1,1) to a graph whose
//! twin edges are removed, [`mso`] renders the labeling problem as an MSO₁
//! sentence, and [`suite`] cross-checks the tracks on seeded random graphs.
//!
//! Vertices are `0..n` in memory; the file formats in [`io`] are 1-based.

pub mod dp;
pub mod error;
pub mod exact;
pub mod generate;
pub mod graph;
pub mod ilp;
pub mod io;
pub mod l11;
pub mod labeling;
pub mod mso;
pub mod par;
pub mod suite;
pub mod tc;
pub mod treedecomp;
pub mod twincover;

pub use dp::{decide_dp, lambda_dp, DpConfig, DpInstance};
pub use error::{Error, Result};
pub use exact::{decide_exact, lambda_exact};
pub use graph::{GapClass, Graph};
pub use l11::{approx_lp1, delete_twin_edges, lambda_l11};
pub use labeling::{verify, Label, Labeling, PqParams};
pub use par::Mode;
pub use tc::{decide_tc, lambda_tc};
pub use treedecomp::{TreeDecomposition, square_td};
pub use twincover::min_twin_cover;
