//! Integer group ring of a free abelian group `Z^b`, i.e. Laurent polynomials
//! in `b` variables with integer coefficients, together with exact division,
//! multivariate gcd and determinants.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

/// Finitely supported map `Z^b -> Z`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl GroupRingElement {
    pub fn zero(nvars: usize) -> Self {
        GroupRingElement {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], 1)
    }

    pub fn monomial(exp: Vec<i64>, coeff: impl Into<BigInt>) -> Self {
        let nvars = exp.len();
        let mut p = Self::zero(nvars);
        p.add_term(exp, coeff.into());
        p
    }

    /// Build from `(exponent, coefficient)` pairs, merging repeated exponents.
    pub fn from_terms<C: Into<BigInt>>(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<i64>, C)>,
    ) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            p.add_term(e, c.into());
        }
        p
    }

    fn add_term(&mut self, exp: Vec<i64>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    /// Terms in increasing lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }
    pub fn coeff(&self, exp: &[i64]) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_default()
    }
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Sum of all coefficients (the image under the augmentation map).
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        GroupRingElement {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Multiply by the monomial `t^shift`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        GroupRingElement {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Componentwise minimum exponent; `None` for zero.
    pub fn min_exponents(&self) -> Option<Vec<i64>> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| {
            acc.iter().zip(e).map(|(a, b)| *a.min(b)).collect()
        }))
    }

    /// Leading term under graded lexicographic order (total degree, then lex).
    pub fn leading_grlex(&self) -> Option<(&Vec<i64>, &BigInt)> {
        self.terms.iter().max_by(|a, b| grlex_cmp(a.0, b.0))
    }

    /// Canonical representative up to units `±t^g`: the graded-lex leading
    /// exponent is moved to the origin and its coefficient made positive.
    pub fn canonical(&self) -> Self {
        let Some((lead, c)) = self.leading_grlex() else {
            return self.clone();
        };
        let neg: Vec<i64> = lead.iter().map(|x| -x).collect();
        let sign = if c.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        self.shift(&neg).scale(&sign)
    }

    /// Change of variables on exponents: `g -> M g` where `M` has `rows` rows.
    pub fn map_exponents(&self, m: &[Vec<i64>]) -> Self {
        let rows = m.len();
        Self::from_terms(
            rows,
            self.terms.iter().map(|(e, c)| {
                let ne: Vec<i64> = m
                    .iter()
                    .map(|r| r.iter().zip(e).map(|(a, b)| a * b).sum())
                    .collect();
                (ne, c.clone())
            }),
        )
    }

    /// Shift so that every exponent is nonnegative with no common monomial factor.
    pub fn to_polynomial(&self) -> (Self, Vec<i64>) {
        match self.min_exponents() {
            None => (self.clone(), vec![0; self.nvars]),
            Some(mn) => {
                let neg: Vec<i64> = mn.iter().map(|x| -x).collect();
                (self.shift(&neg), mn)
            }
        }
    }

    /// True iff `self = d q` for some `q`; zero divides only zero.
    pub fn divisible_by(&self, d: &Self) -> bool {
        if d.is_zero() {
            self.is_zero()
        } else {
            self.divide_exact(d).is_some()
        }
    }

    /// Exact quotient `self / d` in the Laurent ring, or `None` if `d` does not divide.
    /// Panics if `d` is zero.
    pub fn divide_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero");
        if self.is_zero() {
            return Some(self.clone());
        }
        let (a, sa) = self.to_polynomial();
        let (b, sb) = d.to_polynomial();
        let q = poly_divide_exact(&a, &b)?;
        let s: Vec<i64> = sa.iter().zip(&sb).map(|(x, y)| x - y).collect();
        Some(q.shift(&s))
    }

    /// Pairs `(exponent, coefficient)` in increasing lexicographic order.
    pub fn to_pairs(&self) -> Vec<(Vec<i64>, BigInt)> {
        self.terms
            .iter()
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect()
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.nvars), |acc, _| &acc * self)
    }
}

pub fn grlex_cmp(a: &[i64], b: &[i64]) -> std::cmp::Ordering {
    let da: i64 = a.iter().sum();
    let db: i64 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// Equality up to multiplication by a unit `±t^g`.
pub fn equal_up_to_unit(a: &GroupRingElement, b: &GroupRingElement) -> bool {
    a.canonical() == b.canonical()
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| {
                    if x == 1 {
                        format!("t{i}")
                    } else {
                        format!("t{i}^{x}")
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Serialized as a list of `[exponent vector, coefficient]` pairs in lex order.
impl Serialize for GroupRingElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            let cv: serde_json::Value = match i64::try_from(c) {
                Ok(x) => x.into(),
                Err(_) => c.to_string().into(),
            };
            seq.serialize_element(&(e, cv))?;
        }
        seq.end()
    }
}

impl Add for &GroupRingElement {
    type Output = GroupRingElement;
    fn add(self, o: &GroupRingElement) -> GroupRingElement {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }
}

impl Sub for &GroupRingElement {
    type Output = GroupRingElement;
    fn sub(self, o: &GroupRingElement) -> GroupRingElement {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), -c.clone());
        }
        r
    }
}

impl Neg for &GroupRingElement {
    type Output = GroupRingElement;
    fn neg(self) -> GroupRingElement {
        self.scale(&-BigInt::one())
    }
}

impl Mul for &GroupRingElement {
    type Output = GroupRingElement;
    // Exponents add when monomials multiply.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: &GroupRingElement) -> GroupRingElement {
        let mut r = GroupRingElement::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                r.add_term(e1.iter().zip(e2).map(|(a, b)| a + b).collect(), c1 * c2);
            }
        }
        r
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GroupRingElement {
            type Output = GroupRingElement;
            fn $m(self, o: GroupRingElement) -> GroupRingElement {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Exact division of polynomials (nonnegative exponents) by lex leading terms.
fn poly_divide_exact(a: &GroupRingElement, b: &GroupRingElement) -> Option<GroupRingElement> {
    let nv = a.nvars;
    let (lb_e, lb_c) = b
        .terms
        .iter()
        .next_back()
        .map(|(e, c)| (e.clone(), c.clone()))?;
    let mut rem = a.clone();
    let mut quo = GroupRingElement::zero(nv);
    while let Some((le, lc)) = rem
        .terms
        .iter()
        .next_back()
        .map(|(e, c)| (e.clone(), c.clone()))
    {
        let de: Vec<i64> = le.iter().zip(&lb_e).map(|(x, y)| x - y).collect();
        if de.iter().any(|&x| x < 0) {
            return None;
        }
        let (qc, r) = lc.div_rem(&lb_c);
        if !r.is_zero() {
            return None;
        }
        let t = GroupRingElement::monomial(de, qc);
        rem = &rem - &(&t * b);
        quo = &quo + &t;
    }
    Some(quo)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("gcd computation exceeded its budget of {budget} intermediate terms")]
    GcdBudgetExceeded { budget: usize },
    #[error("inexact division during fraction-free elimination")]
    InexactDivision,
}

/// Cap on intermediate term counts during gcd computations.
#[derive(Clone, Copy, Debug)]
pub struct GcdBudget {
    pub max_terms: usize,
}

impl Default for GcdBudget {
    fn default() -> Self {
        GcdBudget { max_terms: 200_000 }
    }
}

fn deg_in(p: &GroupRingElement, v: usize) -> i64 {
    p.terms.keys().map(|e| e[v]).max().unwrap_or(-1)
}

/// Coefficient of `x_v^d`, as a polynomial in the other variables.
fn coeff_in(p: &GroupRingElement, v: usize, d: i64) -> GroupRingElement {
    GroupRingElement {
        nvars: p.nvars,
        terms: p
            .terms
            .iter()
            .filter(|(e, _)| e[v] == d)
            .map(|(e, c)| {
                let mut e = e.clone();
                e[v] = 0;
                (e, c.clone())
            })
            .collect(),
    }
}

fn x_pow(nvars: usize, v: usize, d: i64) -> GroupRingElement {
    let mut e = vec![0; nvars];
    e[v] = d;
    GroupRingElement::monomial(e, 1)
}

/// Make the lex-leading coefficient positive.
fn normalize_sign(p: GroupRingElement) -> GroupRingElement {
    match p.terms.iter().next_back() {
        Some((_, c)) if c.is_negative() => -&p,
        _ => p,
    }
}

struct GcdCtx {
    budget: usize,
}

impl GcdCtx {
    fn check(&self, p: &GroupRingElement) -> Result<(), PolyError> {
        if p.len() > self.budget {
            Err(PolyError::GcdBudgetExceeded {
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    /// Content of `p` as a polynomial in `x_v` (a polynomial in `x_0..x_{v-1}`).
    fn content(&self, p: &GroupRingElement, v: usize) -> Result<GroupRingElement, PolyError> {
        let mut g = GroupRingElement::zero(p.nvars);
        for d in 0..=deg_in(p, v) {
            let c = coeff_in(p, v, d);
            if !c.is_zero() {
                g = self.gcd(&g, &c, v)?;
                if g.is_monomial() && g.coeff(&vec![0; p.nvars]).is_one() {
                    break;
                }
            }
        }
        Ok(g)
    }

    fn primitive_part(
        &self,
        p: &GroupRingElement,
        v: usize,
    ) -> Result<GroupRingElement, PolyError> {
        if p.is_zero() {
            return Ok(p.clone());
        }
        let c = self.content(p, v)?;
        Ok(poly_divide_exact(p, &c).expect("content divides"))
    }

    /// Pseudo-remainder of `a` by `b` in `x_v`.
    fn prem(
        &self,
        a: &GroupRingElement,
        b: &GroupRingElement,
        v: usize,
    ) -> Result<GroupRingElement, PolyError> {
        let db = deg_in(b, v);
        let lb = coeff_in(b, v, db);
        let mut r = a.clone();
        while !r.is_zero() && deg_in(&r, v) >= db {
            let dr = deg_in(&r, v);
            let lr = coeff_in(&r, v, dr);
            r = &(&lb * &r) - &(&(&lr * &x_pow(a.nvars, v, dr - db)) * b);
            self.check(&r)?;
        }
        Ok(r)
    }

    /// Gcd of polynomials involving only the variables `x_0..x_{active-1}`.
    fn gcd(
        &self,
        a: &GroupRingElement,
        b: &GroupRingElement,
        active: usize,
    ) -> Result<GroupRingElement, PolyError> {
        if a.is_zero() {
            return Ok(normalize_sign(b.clone()));
        }
        if b.is_zero() {
            return Ok(normalize_sign(a.clone()));
        }
        let nv = a.nvars;
        if active == 0 {
            let x = a.coeff(&vec![0; nv]).gcd(&b.coeff(&vec![0; nv]));
            return Ok(GroupRingElement::monomial(vec![0; nv], x));
        }
        let v = active - 1;
        if deg_in(a, v) == 0 && deg_in(b, v) == 0 {
            return self.gcd(a, b, v);
        }
        let ca = self.content(a, v)?;
        let cb = self.content(b, v)?;
        let c = self.gcd(&ca, &cb, v)?;
        let mut f = poly_divide_exact(a, &ca).expect("content divides");
        let mut g = poly_divide_exact(b, &cb).expect("content divides");
        if deg_in(&f, v) < deg_in(&g, v) {
            std::mem::swap(&mut f, &mut g);
        }
        let h = loop {
            if deg_in(&g, v) == 0 {
                break GroupRingElement::one(nv);
            }
            let r = self.prem(&f, &g, v)?;
            if r.is_zero() {
                break self.primitive_part(&g, v)?;
            }
            f = g;
            g = self.primitive_part(&r, v)?;
        };
        Ok(normalize_sign(&c * &h))
    }
}

/// Gcd in the Laurent ring, returned in canonical form (defined up to units).
pub fn gcd(
    a: &GroupRingElement,
    b: &GroupRingElement,
    budget: GcdBudget,
) -> Result<GroupRingElement, PolyError> {
    let (pa, _) = a.to_polynomial();
    let (pb, _) = b.to_polynomial();
    let ctx = GcdCtx {
        budget: budget.max_terms,
    };
    Ok(ctx.gcd(&pa, &pb, a.nvars)?.canonical())
}

/// Gcd of a list of elements; zero entries are ignored.
pub fn gcd_all<'a>(
    items: impl IntoIterator<Item = &'a GroupRingElement>,
    nvars: usize,
    budget: GcdBudget,
) -> Result<GroupRingElement, PolyError> {
    let mut g = GroupRingElement::zero(nvars);
    for p in items {
        if p.is_zero() {
            continue;
        }
        g = gcd(&g, p, budget)?;
        if g.is_monomial() {
            break;
        }
    }
    Ok(g)
}

/// Square matrix of group ring elements.
pub type PolyMatrix = Vec<Vec<GroupRingElement>>;

/// Determinant by fraction-free (Bareiss) elimination with exact division.
pub fn determinant(
    m: &[Vec<GroupRingElement>],
    nvars: usize,
) -> Result<GroupRingElement, PolyError> {
    let n = m.len();
    if n == 0 {
        return Ok(GroupRingElement::one(nvars));
    }
    let mut a: PolyMatrix = m.to_vec();
    let mut sign_neg = false;
    let mut prev = GroupRingElement::one(nvars);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(GroupRingElement::zero(nvars));
            };
            a.swap(k, p);
            sign_neg = !sign_neg;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.divide_exact(&prev).ok_or(PolyError::InexactDivision)?;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if sign_neg { -&d } else { d })
}

/// Determinant by Laplace expansion along the first row (test oracle).
pub fn determinant_cofactor(m: &[Vec<GroupRingElement>], nvars: usize) -> GroupRingElement {
    let n = m.len();
    if n == 0 {
        return GroupRingElement::one(nvars);
    }
    let mut total = GroupRingElement::zero(nvars);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: PolyMatrix = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * &determinant_cofactor(&minor, nvars);
        total = if j % 2 == 0 {
            &total + &term
        } else {
            &total - &term
        };
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(e: i64) -> GroupRingElement {
        GroupRingElement::monomial(vec![e], 1)
    }
    fn c(x: i64) -> GroupRingElement {
        GroupRingElement::monomial(vec![0], x)
    }

    #[test]
    fn canonical_form_is_idempotent_and_unit_invariant() {
        let p = &(&c(1) - &t(1)) * &(&c(2) + &t(-3));
        let cp = p.canonical();
        assert_eq!(cp.canonical(), cp);
        assert_eq!((-&p.shift(&[5])).canonical(), cp);
    }

    #[test]
    fn exact_division() {
        let a = &c(1) - &t(1);
        let b = &c(1) + &t(2);
        let p = &a * &b;
        assert_eq!(p.divide_exact(&a).unwrap(), b);
        assert!(p.divide_exact(&(&c(1) + &t(1))).is_none());
        let zero = GroupRingElement::zero(1);
        assert!(zero.divisible_by(&zero));
        assert!(!p.divisible_by(&zero));
        assert!(p.divisible_by(&a));
        assert_eq!(
            p.shift(&[-4]).divide_exact(&a.shift(&[3])).unwrap(),
            b.shift(&[-7])
        );
    }

    #[test]
    fn gcd_univariate() {
        let a = &c(1) - &t(1);
        let b = &(&c(1) - &(&c(3) * &t(1))) + &t(2);
        let g = gcd(&(&a * &b), &(&b * &(&c(1) + &t(1))), GcdBudget::default()).unwrap();
        assert_eq!(g, b.canonical());
    }

    #[test]
    fn determinant_of_units() {
        let id = vec![vec![c(1), c(0)], vec![c(0), c(1)]];
        assert_eq!(determinant(&id, 1).unwrap(), c(1));
        let sw = vec![vec![c(0), c(1)], vec![c(1), c(0)]];
        assert_eq!(determinant(&sw, 1).unwrap(), c(-1));
    }

    fn arb_poly(nv: usize) -> impl Strategy<Value = GroupRingElement> {
        proptest::collection::vec((proptest::collection::vec(-2i64..3, nv), -3i64..4), 0..4)
            .prop_map(move |ts| GroupRingElement::from_terms(nv, ts))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(2), b in arb_poly(2), d in arb_poly(2)) {
            prop_assert_eq!(&(&a * &b) * &d, &a * &(&b * &d));
            prop_assert_eq!(&a * &(&b + &d), &(&a * &b) + &(&a * &d));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a * &b).eval_at_one(), a.eval_at_one() * b.eval_at_one());
        }

        #[test]
        fn gcd_divides_and_is_maximal(a in arb_poly(2), b in arb_poly(2), d in arb_poly(2)) {
            prop_assume!(!a.is_zero() && !b.is_zero() && !d.is_zero());
            let x = &a * &d;
            let y = &b * &d;
            let g = gcd(&x, &y, GcdBudget::default()).unwrap();
            prop_assert!(x.divide_exact(&g).is_some());
            prop_assert!(y.divide_exact(&g).is_some());
            prop_assert!(g.divide_exact(&d).is_some());
        }

        #[test]
        fn bareiss_matches_cofactor(entries in proptest::collection::vec(arb_poly(1), 16), n in 1usize..5) {
            let m: PolyMatrix = (0..n).map(|i| (0..n).map(|j| entries[i * 4 + j].clone()).collect()).collect();
            prop_assert_eq!(determinant(&m, 1).unwrap(), determinant_cofactor(&m, 1));
        }
    }
}
