use std::cmp::Ordering;

/// Exponent vector over the commuting generators plus a bit-set of ghosts.
///
/// Layout of `exps`: `[φ^0..φ^{2n-1}, λ_0..λ_{2n-1}, ħ]`. Ghost bits follow
/// the canonical order `c^0 < … < c^{2n-1} < c̄_0 < … < c̄_{2n-1}`; the ghost
/// product they denote is always written in ascending bit order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    pub(crate) exps: Vec<u32>,
    pub(crate) ghosts: u64,
}

#[inline]
pub(crate) fn bits_above(bit: u32) -> u64 {
    if bit >= 63 {
        0
    } else {
        !((1u64 << (bit + 1)) - 1)
    }
}

#[inline]
pub(crate) fn bits_below(bit: u32) -> u64 {
    (1u64 << bit) - 1
}

impl Monomial {
    pub(crate) fn one(slots: usize) -> Self {
        Monomial {
            exps: vec![0; slots],
            ghosts: 0,
        }
    }

    pub fn is_one(&self) -> bool {
        self.ghosts == 0 && self.exps.iter().all(|&e| e == 0)
    }

    pub fn hbar_exponent(&self) -> u32 {
        *self.exps.last().expect("hbar slot")
    }

    /// Degree over everything except `ħ`.
    fn body_degree(&self) -> u32 {
        let k = self.exps.len() - 1;
        self.exps[..k].iter().sum::<u32>() + self.ghosts.count_ones()
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().sum::<u32>() + self.ghosts.count_ones()
    }

    pub fn ghost_count(&self) -> u32 {
        self.ghosts.count_ones()
    }

    pub fn is_odd(&self) -> bool {
        self.ghosts.count_ones() % 2 == 1
    }

    /// Graded product: `None` when a ghost repeats, else the product and the
    /// sign `(-1)^{#transpositions}` needed to restore canonical ghost order.
    pub(crate) fn mul(&self, rhs: &Monomial) -> Option<(Monomial, bool)> {
        if self.ghosts & rhs.ghosts != 0 {
            return None;
        }
        let mut swaps = 0u32;
        let mut rest = rhs.ghosts;
        while rest != 0 {
            let bit = rest.trailing_zeros();
            swaps += (self.ghosts & bits_above(bit)).count_ones();
            rest &= rest - 1;
        }
        let exps = self
            .exps
            .iter()
            .zip(&rhs.exps)
            .map(|(a, b)| a + b)
            .collect();
        Some((
            Monomial {
                exps,
                ghosts: self.ghosts | rhs.ghosts,
            },
            swaps % 2 == 1,
        ))
    }

    /// `self / rhs` when `rhs` is ghost-free and divides `self`.
    pub(crate) fn div_commuting(&self, rhs: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(rhs.ghosts, 0);
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&rhs.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Monomial {
            exps,
            ghosts: self.ghosts,
        })
    }

    /// Graded-lex order used for division (a term order, unlike `Ord`).
    pub(crate) fn grlex_cmp(&self, other: &Monomial) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
            .then_with(|| self.ghosts.cmp(&other.ghosts))
    }
}

/// Print order: ascending `ħ` power, then descending degree, then
/// descending lexicographic exponents (`q` before `p` before `λ`).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let k = self.exps.len() - 1;
        self.hbar_exponent()
            .cmp(&other.hbar_exponent())
            .then_with(|| other.body_degree().cmp(&self.body_degree()))
            .then_with(|| other.exps[..k].cmp(&self.exps[..k]))
            .then_with(|| other.ghosts.reverse_bits().cmp(&self.ghosts.reverse_bits()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
