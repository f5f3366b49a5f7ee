//! Validity flags attached to computed points.
//!
//! The closed-form squeezing results hold only inside a window of
//! parameters; points outside are still computed and marked here.

use core::fmt;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ValidityFlags(u8);

impl ValidityFlags {
    /// g/α, gℓ or αℓ outside the window gℓ ≥ 10, αℓ ≤ 0.1, g/α ≥ 10.
    pub const G_OVER_ALPHA_LOW: Self = Self(1);
    /// Saturation regime outside the formula's assumptions.
    pub const KAPPA_REGIME: Self = Self(1 << 1);
    /// Self-elliptization over the cell is not small.
    pub const SE_LARGE: Self = Self(1 << 2);
    /// Doppler quadrature missed its tolerance.
    pub const DOPPLER_UNCONVERGED: Self = Self(1 << 3);

    const NAMES: [(Self, &'static str); 4] = [
        (Self::G_OVER_ALPHA_LOW, "g_over_alpha_low"),
        (Self::KAPPA_REGIME, "kappa_regime"),
        (Self::SE_LARGE, "se_large"),
        (Self::DOPPLER_UNCONVERGED, "doppler_unconverged"),
    ];

    pub const fn empty() -> Self {
        Self(0)
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, other: Self) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn insert(&mut self, other: Self) {
        self.0 |= other.0;
    }

    pub fn set(&mut self, other: Self, on: bool) {
        if on {
            self.0 |= other.0;
        }
    }

    pub const fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    /// Names of the set flags in canonical order.
    pub fn names(self) -> impl Iterator<Item = &'static str> {
        Self::NAMES
            .into_iter()
            .filter(move |(f, _)| self.contains(*f))
            .map(|(_, n)| n)
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::NAMES.iter().find(|(_, n)| *n == name).map(|(f, _)| *f)
    }
}

impl core::ops::BitOr for ValidityFlags {
    type Output = Self;
    fn bitor(self, rhs: Self) -> Self {
        self.union(rhs)
    }
}

impl core::ops::BitOrAssign for ValidityFlags {
    fn bitor_assign(&mut self, rhs: Self) {
        self.insert(rhs);
    }
}

/// `|`-separated names, empty when no flag is set.
impl fmt::Display for ValidityFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, name) in self.names().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            f.write_str(name)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec::Vec;

    #[test]
    fn display_and_parse() {
        let f = ValidityFlags::SE_LARGE | ValidityFlags::G_OVER_ALPHA_LOW;
        assert_eq!(f.to_string(), "g_over_alpha_low|se_large");
        let back = f
            .names()
            .map(|n| ValidityFlags::from_name(n).unwrap())
            .fold(ValidityFlags::empty(), |a, b| a | b);
        assert_eq!(back, f);
        assert_eq!(ValidityFlags::empty().to_string(), "");
        assert!(ValidityFlags::empty().names().collect::<Vec<_>>().is_empty());
    }
}
