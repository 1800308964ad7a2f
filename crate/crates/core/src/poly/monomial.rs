use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// Upper bound on the number of variables of any polynomial ring used here.
pub const MAX_VARS: usize = 16;

/// Dense exponent vector with cached total degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    deg: u32,
}

impl Default for Monomial {
    fn default() -> Self {
        Monomial::one()
    }
}

impl Monomial {
    pub const fn one() -> Self {
        Monomial {
            exps: [0; MAX_VARS],
            deg: 0,
        }
    }

    pub fn var(i: usize) -> Self {
        let mut m = Monomial::one();
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Monomial::one();
        m.exps[..exps.len()].copy_from_slice(exps);
        m.deg = exps.iter().map(|&e| e as u32).sum();
        m
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    #[inline]
    pub fn exps(&self) -> &[u16; MAX_VARS] {
        &self.exps
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn with_exp(mut self, i: usize, e: u16) -> Self {
        self.deg = self.deg - self.exps[i] as u32 + e as u32;
        self.exps[i] = e;
        self
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u16; MAX_VARS];
        for (k, e) in exps.iter_mut().enumerate() {
            *e = self.exps[k] + other.exps[k];
        }
        Monomial {
            exps,
            deg: self.deg + other.deg,
        }
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    #[inline]
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let mut exps = [0u16; MAX_VARS];
        for (k, e) in exps.iter_mut().enumerate() {
            *e = other.exps[k] - self.exps[k];
        }
        Some(Monomial {
            exps,
            deg: other.deg - self.deg,
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u16; MAX_VARS];
        let mut deg = 0;
        for (k, e) in exps.iter_mut().enumerate() {
            *e = self.exps[k].max(other.exps[k]);
            deg += *e as u32;
        }
        Monomial { exps, deg }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u16; MAX_VARS];
        let mut deg = 0;
        for (k, e) in exps.iter_mut().enumerate() {
            *e = self.exps[k].min(other.exps[k]);
            deg += *e as u32;
        }
        Monomial { exps, deg }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// `Some(i)` if the monomial is `x_i^k` with `k >= 1`.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    /// Largest variable index with a nonzero exponent.
    pub fn last_var(&self) -> Option<usize> {
        self.exps.iter().rposition(|&e| e > 0)
    }

    /// Smallest variable index with a nonzero exponent.
    pub fn first_var(&self) -> Option<usize> {
        self.exps.iter().position(|&e| e > 0)
    }

    /// Apply a variable permutation: new index `perm[i]` receives old exponent `i`.
    pub fn permuted(&self, perm: &[usize]) -> Monomial {
        let mut exps = [0u16; MAX_VARS];
        for (old, &new) in perm.iter().enumerate() {
            exps[new] = self.exps[old];
        }
        Monomial { exps, deg: self.deg }
    }

    /// Divisibility mask: bit `i` set iff `x_i` occurs.
    #[inline]
    pub fn support_mask(&self) -> u32 {
        let mut m = 0u32;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                m |= 1 << i;
            }
        }
        m
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.exps.iter().rposition(|&e| e > 0).map_or(0, |p| p + 1);
        write!(f, "{:?}", &self.exps[..last])
    }
}

/// Term orders. Variable 0 is the largest variable in both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    Grevlex,
}

impl MonomialOrder {
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::Grevlex => match a.deg.cmp(&b.deg) {
                Ordering::Equal => {
                    for k in (0..MAX_VARS).rev() {
                        match a.exps[k].cmp(&b.exps[k]) {
                            Ordering::Equal => continue,
                            other => return other.reverse(),
                        }
                    }
                    Ordering::Equal
                }
                other => other,
            },
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MonomialOrder::Lex => "lex",
            MonomialOrder::Grevlex => "grevlex",
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MonomialOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "lex" => Ok(MonomialOrder::Lex),
            "grevlex" => Ok(MonomialOrder::Grevlex),
            other => Err(format!("unknown monomial order {other:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::from_exps(e)
    }

    #[test]
    fn lex_and_grevlex_differ() {
        // x*z^2 vs y^3 in (x, y, z)
        let a = m(&[1, 0, 2]);
        let b = m(&[0, 3, 0]);
        assert_eq!(MonomialOrder::Lex.cmp(&a, &b), Ordering::Greater);
        assert_eq!(MonomialOrder::Grevlex.cmp(&a, &b), Ordering::Less);
        // x*y*z vs x^2*z? same degree; grevlex: smaller power of last var wins
        let c = m(&[1, 1, 1]);
        let d = m(&[2, 0, 1]);
        assert_eq!(MonomialOrder::Grevlex.cmp(&c, &d), Ordering::Less);
        assert_eq!(
            MonomialOrder::Grevlex.cmp(&m(&[0, 2, 0]), &m(&[1, 0, 1])),
            Ordering::Greater
        );
    }

    #[test]
    fn division_and_lcm() {
        let a = m(&[2, 1]);
        let b = m(&[1, 3]);
        assert_eq!(a.lcm(&b), m(&[2, 3]));
        assert_eq!(a.gcd(&b), m(&[1, 1]));
        assert!(m(&[1, 1]).divides(&a));
        assert_eq!(m(&[1, 1]).quotient_of(&a), Some(m(&[1, 0])));
        assert_eq!(b.quotient_of(&a), None);
        assert_eq!(m(&[0, 0, 5]).pure_power_var(), Some(2));
        assert_eq!(a.pure_power_var(), None);
        assert_eq!(Monomial::one().pure_power_var(), None);
    }
}
