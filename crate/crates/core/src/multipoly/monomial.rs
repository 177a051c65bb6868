use std::fmt;

/// Largest supported number of variables, auxiliary ones included.
pub const MAX_VARS: usize = 16;

/// A power product `x_0^e_0 * ... * x_k^e_k` with its total degree cached.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u8; MAX_VARS],
    degree: u16,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            exps: [0; MAX_VARS],
            degree: 0,
        }
    }

    pub fn var(i: usize) -> Self {
        let mut m = Self::one();
        m.exps[i] = 1;
        m.degree = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Self::one();
        for (i, &e) in exps.iter().enumerate() {
            m.exps[i] = u8::try_from(e).expect("exponent exceeds 255");
            m.degree += e as u16;
        }
        m
    }

    pub fn degree(&self) -> u32 {
        self.degree as u32
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        self.exps[..nvars].iter().map(|&e| e as u32).collect()
    }

    pub(crate) fn raw(&self) -> &[u8; MAX_VARS] {
        &self.exps
    }

    /// Index of the highest-numbered variable occurring, if any.
    pub fn last_var(&self) -> Option<usize> {
        self.exps.iter().rposition(|&e| e > 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.exps[i] = m.exps[i]
                .checked_add(other.exps[i])
                .expect("exponent overflow");
        }
        m.degree += other.degree;
        m
    }

    pub fn mul_var(&self, i: usize) -> Self {
        let mut m = *self;
        m.exps[i] += 1;
        m.degree += 1;
        m
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient(&self, other: &Self) -> Self {
        let mut m = *other;
        for i in 0..MAX_VARS {
            m.exps[i] -= self.exps[i];
        }
        m.degree -= self.degree;
        m
    }

    pub fn checked_div_var(&self, i: usize) -> Option<Self> {
        if self.exps[i] == 0 {
            return None;
        }
        let mut m = *self;
        m.exps[i] -= 1;
        m.degree -= 1;
        Some(m)
    }

    pub fn lcm(&self, other: &Self) -> Self {
        let mut m = Self::one();
        for i in 0..MAX_VARS {
            m.exps[i] = self.exps[i].max(other.exps[i]);
            m.degree += m.exps[i] as u16;
        }
        m
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut m = Self::one();
        for i in 0..MAX_VARS {
            m.exps[i] = self.exps[i].min(other.exps[i]);
            m.degree += m.exps[i] as u16;
        }
        m
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Moves every exponent `shift` places up (used to prepend auxiliary variables).
    pub fn shifted(&self, shift: usize) -> Self {
        let mut m = Self::one();
        for i in 0..MAX_VARS - shift {
            m.exps[i + shift] = self.exps[i];
        }
        assert!(self.exps[MAX_VARS - shift..].iter().all(|&e| e == 0), "variable overflow");
        m.degree = self.degree;
        m
    }

    /// Drops the first `shift` variables, assuming they do not occur.
    pub fn unshifted(&self, shift: usize) -> Self {
        let mut m = Self::one();
        for i in shift..MAX_VARS {
            m.exps[i - shift] = self.exps[i];
        }
        m.degree = self.degree - self.exps[..shift].iter().map(|&e| e as u16).sum::<u16>();
        m
    }

    /// Renames `x_i` to `x_{perm[i]}`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut m = Self::one();
        for (i, &p) in perm.iter().enumerate() {
            m.exps[p] = self.exps[i];
        }
        m.degree = self.degree;
        m
    }

    pub(crate) fn fmt_vars(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "x{i}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_vars(f)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_vars(f)
    }
}

/// All monomials of degree `d` in `nvars` variables, lex-descending.
pub(crate) fn monomials_in(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, i: usize, left: u32, cur: &mut [u32], out: &mut Vec<Monomial>) {
        if i + 1 == nvars {
            cur[i] = left;
            out.push(Monomial::from_exponents(cur));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(nvars, i + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::one());
        }
        return out;
    }
    let mut cur = vec![0u32; nvars];
    rec(nvars, 0, d, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisibility_and_lcm() {
        let a = Monomial::from_exponents(&[2, 0, 1]);
        let b = Monomial::from_exponents(&[1, 1, 1]);
        assert!(!a.divides(&b));
        let l = a.lcm(&b);
        assert_eq!(l, Monomial::from_exponents(&[2, 1, 1]));
        assert_eq!(a.quotient(&l), Monomial::from_exponents(&[0, 1, 0]));
        assert_eq!(a.gcd(&b).degree(), 2);
        assert!(Monomial::var(0).is_coprime(&Monomial::var(1)));
    }

    #[test]
    fn shifting_round_trip() {
        let a = Monomial::from_exponents(&[2, 0, 1]);
        assert_eq!(a.shifted(1).unshifted(1), a);
        assert_eq!(a.shifted(1).exp(1), 2);
    }

    #[test]
    fn display() {
        assert_eq!(Monomial::from_exponents(&[2, 0, 1]).to_string(), "x0^2*x2");
        assert_eq!(Monomial::one().to_string(), "1");
    }
}
