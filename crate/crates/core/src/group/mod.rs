//! Group expressions and wreath-product elements.
//!
//! A group expression is built from the atoms `C2` (order two), `Z`
//! (integer line), `Z2` (integer grid) and the left-associative binary
//! operator `wr`: `A wr B` is the restricted wreath product A ≀ B with
//! lamp group A and base group B. Elements of `A wr B` are pairs
//! `(lamps, position)` where `lamps` maps finitely many base points to
//! non-identity lamp values and `position` is a base element. The product
//! rule is
//!
//! ```text
//! (ω, g) · (ξ, k) = (x ↦ ω(x) ξ(g⁻¹ x), g k)
//! ```
//!
//! so right multiplication by a lamp generator changes the lamp at the
//! current position and right multiplication by a base generator moves
//! the position. Lamp maps are kept canonical (no identity values, sorted
//! keys), which makes structural equality coincide with group equality.

mod element;
mod metric;
mod parse;
mod serial;

pub use element::{
    identity, inverse, is_identity, multiply, standard_generators, validate, wreath_generators,
    Element, Generator, WreathElement,
};
pub use metric::{bfs_ball, word_length, LengthMode, WordLength};
pub use parse::parse_group_spec;
pub use serial::{element_from_json, element_key, element_to_json};

use crate::{Error, Result};
use std::fmt;

/// A group expression.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupSpec {
    /// The two-element group {0, 1} under xor.
    CyclicTwo,
    /// The integers under addition.
    IntegerLine,
    /// Z², componentwise addition.
    IntegerGrid,
    /// Restricted wreath product: lamp group ≀ base group.
    Wreath(Box<GroupSpec>, Box<GroupSpec>),
}

impl GroupSpec {
    pub fn wreath(lamp: GroupSpec, base: GroupSpec) -> Self {
        GroupSpec::Wreath(Box::new(lamp), Box::new(base))
    }

    /// Lamp group of a wreath product.
    pub fn lamp(&self) -> Option<&GroupSpec> {
        match self {
            GroupSpec::Wreath(l, _) => Some(l),
            _ => None,
        }
    }

    /// Base group of a wreath product.
    pub fn base(&self) -> Option<&GroupSpec> {
        match self {
            GroupSpec::Wreath(_, b) => Some(b),
            _ => None,
        }
    }

    pub fn is_wreath(&self) -> bool {
        matches!(self, GroupSpec::Wreath(..))
    }

    /// True for the lattice atoms Z and Z².
    pub fn is_lattice(&self) -> bool {
        matches!(self, GroupSpec::IntegerLine | GroupSpec::IntegerGrid)
    }

    /// Parse a group expression; see [`parse_group_spec`].
    pub fn parse(text: &str) -> Result<Self> {
        parse_group_spec(text)
    }

    pub(crate) fn expect_wreath(&self) -> Result<(&GroupSpec, &GroupSpec)> {
        match self {
            GroupSpec::Wreath(l, b) => Ok((l, b)),
            _ => Err(Error::Unsupported(format!(
                "{self} is not a wreath product"
            ))),
        }
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_group_spec(s)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::CyclicTwo => write!(f, "C2"),
            GroupSpec::IntegerLine => write!(f, "Z"),
            GroupSpec::IntegerGrid => write!(f, "Z2"),
            GroupSpec::Wreath(l, b) => {
                // `wr` associates to the left, so only the base side needs
                // parentheses when it is itself a wreath product.
                write!(f, "{l} wr ")?;
                if b.is_wreath() {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_round_trips() {
        for text in [
            "C2",
            "Z",
            "Z2",
            "C2 wr Z",
            "C2 wr Z2",
            "C2 wr Z2 wr Z2",
            "C2 wr (Z wr Z2)",
            "(C2 wr Z2) wr Z2",
        ] {
            let spec = GroupSpec::parse(text).unwrap();
            let printed = spec.to_string();
            let reparsed = GroupSpec::parse(&printed).unwrap();
            assert_eq!(spec, reparsed, "{text} -> {printed}");
        }
    }
}
