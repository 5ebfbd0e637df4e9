//! Sparse multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::field::{rational_digits, Rational};

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut m = vec![0; nvars];
        m[i] = 1;
        Poly::monomial(m, Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Poly::zero(m.len());
        p.add_term(m, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &[u32]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        assert_eq!(m.len(), self.nvars, "monomial arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars);
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut s = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    t *= x;
                }
            }
            s += t;
        }
        s
    }

    /// `self(values[0], …, values[n−1])`, each value a polynomial in a
    /// common set of variables.
    pub fn substitute(&self, values: &[Poly]) -> Poly {
        assert_eq!(values.len(), self.nvars);
        let target = values.first().map_or(0, |p| p.nvars);
        let mut powers: Vec<Vec<Poly>> = values
            .iter()
            .map(|v| vec![Poly::one(target), v.clone()])
            .collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&values[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize]);
            }
            out = out.add(&t);
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[i] -= 1;
            out.add_term(m2, c * Rational::from_integer(m[i].into()));
        }
        out
    }

    pub fn max_coeff_digits(&self) -> usize {
        self.terms.values().map(rational_digits).max().unwrap_or(0)
    }

    /// Terms in display order: by total degree, then lexicographically,
    /// both descending.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        t
    }

    /// Canonical text form, readable back by [`crate::parse::parse_poly`].
    pub fn format(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        names[i].to_string()
                    } else {
                        format!("{}^{}", names[i], e)
                    }
                })
                .collect();
            if vars.is_empty() {
                let _ = write!(s, "{a}");
            } else {
                if !a.is_one() {
                    let _ = write!(s, "{a}*");
                }
                s.push_str(&vars.join("*"));
            }
        }
        s
    }
}

/// All exponent vectors in `nvars` variables of total degree `d`, in
/// lexicographically descending order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() == nvars - 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(nvars, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        return out;
    }
    rec(nvars, d, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, rat_int};
    use proptest::prelude::*;

    fn x(i: usize) -> Poly {
        Poly::var(3, i)
    }

    #[test]
    fn arithmetic_and_format() {
        let p = x(0).mul(&x(2)).sub(&x(1).pow(2));
        assert_eq!(p.format(&["x0", "x1", "x2"]), "x0*x2 - x1^2");
        let q = x(0)
            .pow(2)
            .scale(&rat(2, 3))
            .add(&Poly::constant(3, rat_int(-5)));
        assert_eq!(q.format(&["x0", "x1", "x2"]), "2/3*x0^2 - 5");
        assert_eq!(Poly::zero(3).format(&["a", "b", "c"]), "0");
    }

    #[test]
    fn substitution_of_parabola() {
        // y0 y2 - y1^2 vanishes on (s^2, s t, t^2)
        let s = Poly::var(2, 0);
        let t = Poly::var(2, 1);
        let q = x(0).mul(&x(2)).sub(&x(1).pow(2));
        let img = q.substitute(&[s.pow(2), s.mul(&t), t.pow(2)]);
        assert!(img.is_zero());
    }

    #[test]
    fn derivatives() {
        let p = x(0).pow(3).mul(&x(1)).scale(&rat_int(2));
        assert_eq!(p.derivative(0), x(0).pow(2).mul(&x(1)).scale(&rat_int(6)));
        assert!(p.derivative(2).is_zero());
    }

    #[test]
    fn monomial_enumeration() {
        let m = monomials_of_degree(3, 2);
        assert_eq!(m.len(), 6);
        assert_eq!(m[0], vec![2, 0, 0]);
        assert_eq!(m[5], vec![0, 0, 2]);
        assert_eq!(monomials_of_degree(9, 2).len(), 45);
        assert_eq!(monomials_of_degree(3, 3).len(), 10);
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec(((0u32..3, 0u32..3, 0u32..3), -5i64..=5, 1i64..4), 0..6).prop_map(
            |ts| {
                let mut p = Poly::zero(3);
                for ((a, b, c), n, d) in ts {
                    p.add_term(vec![a, b, c], rat(n, d));
                }
                p
            },
        )
    }

    proptest! {
        #[test]
        fn evaluation_is_a_ring_map(p in small_poly(), q in small_poly(), pt in proptest::collection::vec(-4i64..=4, 3)) {
            let pt: Vec<Rational> = pt.into_iter().map(rat_int).collect();
            prop_assert_eq!(p.mul(&q).eval(&pt), p.eval(&pt) * q.eval(&pt));
            prop_assert_eq!(p.add(&q).eval(&pt), p.eval(&pt) + q.eval(&pt));
        }

        #[test]
        fn substitution_matches_evaluation(p in small_poly(), a in small_poly(), b in small_poly(), c in small_poly(),
                                           pt in proptest::collection::vec(-3i64..=3, 3)) {
            let pt: Vec<Rational> = pt.into_iter().map(rat_int).collect();
            let inner = [a.eval(&pt), b.eval(&pt), c.eval(&pt)];
            prop_assert_eq!(p.substitute(&[a, b, c]).eval(&pt), p.eval(&inner));
        }
    }
}
