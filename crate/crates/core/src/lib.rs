//! Counting generalized Dyck paths and checking how they govern list
//! colouring and the painting game on joins `K_n ⊕ K̄_m`.
//!
//! * [`pathcount`]: bound vectors, dominated lattice paths and three
//!   independent ways to count them.
//! * [`graphcore`]: small labelled graphs, token maps, joins and unions.
//! * [`paintgame`]: the Lister/Painter game, exhaustive solver, `m_p` and
//!   the constructive Painter strategy for complete-graph joins.
//! * [`choose`]: list colouring, `Φ`/`κ`, `m_c` by enumeration and the
//!   adversarial list assignment.
//! * [`verify`]: sweeps that check the identities and emit reports.

pub mod choose;
pub mod error;
pub mod graphcore;
pub mod paintgame;
pub mod pathcount;
pub mod verify;

pub use error::{Error, Result};
pub use graphcore::{Instance, SimpleGraph, TokenMap};
pub use pathcount::{BigCount, LatticePath, Method, Step, XVector};
