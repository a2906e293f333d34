//! Exact-arithmetic engine for telescoping and parameterized telescoping in
//! towers of Pi/Sigma* extensions: difference-field representations of
//! indefinite nested sums and products, full solution bases of first-order
//! parameterized linear difference equations, first-entry and reduced
//! (refined) telescoping, and the structural shortcuts they enable.

pub mod arith;
pub mod bounds;
pub mod error;
pub mod fplde;
pub mod linsolve;
pub mod pt;
pub mod refined;
pub mod structure;
pub mod tower;

pub use arith::{Elem, Q};
pub use error::{Error, Result};
pub use tower::{GenKind, Generator, Tower, TowerElement};

/// Tunables for the bound heuristics, surfaced on the CLI.
#[derive(Clone, Debug)]
pub struct Config {
    /// Window for the shift-gcd denominator scan above the rational base.
    pub den_window: u32,
    /// Extra degree headroom added to the incomplete degree bounds.
    pub deg_slack: i64,
    /// Use the direct ansatz at the rational base (Remark-2 fast path)
    /// instead of the generic degree reduction.
    pub rational_direct: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config { den_window: 10, deg_slack: 2, rational_direct: true }
    }
}

/// Incompleteness markers accumulated while solving. A found solution is
/// always certificate-checked; the flags only qualify *nonexistence*
/// answers ("no solution found (bound-limited)" rather than a proof).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    /// A windowed or heuristic bound was used somewhere.
    pub bound_limited: bool,
    /// A generator was accepted without the constant-field check.
    pub unverified_extension: bool,
}

impl Flags {
    pub fn merge(&mut self, other: Flags) {
        self.bound_limited |= other.bound_limited;
        self.unverified_extension |= other.unverified_extension;
    }

    pub fn labels(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.bound_limited {
            v.push("bound-limited");
        }
        if self.unverified_extension {
            v.push("unverified-extension");
        }
        v
    }
}
