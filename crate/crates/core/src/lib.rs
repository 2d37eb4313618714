//! Fair splitting of colored paths and necklaces.
//!
//! * [`signkit`]: sign vectors, the alternation number, and an exhaustive
//!   checker for antipodal labelings of the octahedral Tucker lemma.
//! * [`pathsplit`]: splitting a colored path (or cycle) into two
//!   independent sets after removing one vertex per color, plus the
//!   `q`-stable generalization and its composition rule.
//! * [`necklace`]: fair `q`-splittings of necklaces where the thieves that
//!   receive the extra bead of each color are fixed in advance, obtained by
//!   rounding a continuous splitting through per-color flow graphs.
//!
//! Vertices, colors, beads, and thieves are all 0-based inside the library.

pub mod bfactor;
pub mod coloring;
pub mod linsolve;
pub mod necklace;
pub mod pathsplit;
pub mod rational;
pub mod signkit;

pub use coloring::{ColoredPath, ColoringError};
pub use rational::Rational;
