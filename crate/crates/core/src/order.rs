use core::fmt;

/// A natural number or infinity.
///
/// Used for multiplicities (`Infinite` when the form is identically zero)
/// and for vanishing orders of truncated series (`Infinite` when every
/// computed coefficient is zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Order::Infinite)
    }

    /// `self >= n`, with infinity above every natural number.
    pub fn at_least(self, n: u32) -> bool {
        self >= Order::Finite(n)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}
