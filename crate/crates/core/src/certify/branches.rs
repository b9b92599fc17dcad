use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::residue::{exponent_window, residue_reduce, Assignment, ExponentTerm, PolyId, Symbol};
use super::{BranchId, Modulus, ResidueCertificate, Witness};
use crate::arith::gcd;
use crate::descent::quartic_y;
use crate::error::{Error, Result};

/// Cartesian product of declared residue ranges, with constants bound on the side.
struct Space {
    dims: Vec<(Symbol, Vec<i64>)>,
    fixed: Assignment,
}

impl Space {
    fn new(fixed: Assignment) -> Self {
        Self { dims: Vec::new(), fixed }
    }

    fn dim(mut self, sym: Symbol, values: impl IntoIterator<Item = i64>) -> Self {
        self.dims.push((sym, values.into_iter().collect()));
        self
    }

    fn size(&self) -> u64 {
        self.dims.iter().map(|(_, v)| v.len() as u64).product()
    }

    /// Visits every tuple; `keep` decides whether it is a witness. Witnesses
    /// come back sorted, so the result does not depend on visiting order.
    fn run(
        &self,
        reverse: bool,
        mut keep: impl FnMut(&Assignment) -> Result<bool>,
    ) -> Result<(u64, Vec<Witness>)> {
        let mut witnesses = Vec::new();
        let mut count = 0u64;
        if self.dims.iter().any(|(_, v)| v.is_empty()) {
            return Ok((0, witnesses));
        }
        let mut idx = vec![0usize; self.dims.len()];
        loop {
            let mut asg = self.fixed.clone();
            let mut tuple = Vec::with_capacity(idx.len());
            for (d, &i) in self.dims.iter().zip(&idx) {
                let i = if reverse { d.1.len() - 1 - i } else { i };
                asg.set(d.0, d.1[i]);
                tuple.push((d.0, d.1[i]));
            }
            count += 1;
            if keep(&asg)? {
                witnesses.push(Witness(tuple));
            }
            // odometer increment, last dimension fastest
            let mut pos = idx.len();
            loop {
                if pos == 0 {
                    witnesses.sort();
                    debug_assert_eq!(count, self.size());
                    return Ok((count, witnesses));
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < self.dims[pos].1.len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
}

fn term(base: i64, coef: u64, offset: i64) -> ExponentTerm {
    ExponentTerm { base, coef, offset }
}

fn cert(
    branch_id: BranchId,
    modulus: Modulus,
    (enumerated, witnesses): (u64, Vec<Witness>),
    derived_constraint: Option<String>,
) -> ResidueCertificate {
    ResidueCertificate {
        branch_id,
        modulus,
        enumerated,
        satisfiable: !witnesses.is_empty(),
        witnesses,
        derived_constraint,
    }
}

fn odd_residues(m: i64) -> Vec<i64> {
    (0..m).filter(|r| r % 2 == 1).collect()
}

fn even_residues(m: i64) -> Vec<i64> {
    (0..m).filter(|r| r % 2 == 0).collect()
}

fn single<T: Copy + Ord>(set: &BTreeSet<T>) -> Option<T> {
    (set.len() == 1).then(|| *set.iter().next().unwrap())
}

/// Windows for `α >= 1` covering the powers of two in the expansion of
/// `(x^2 + 2^(2α) 5^j)^5 - x^10`.
fn eq7_alpha_window(m: u64) -> Vec<i64> {
    exponent_window(&[term(2, 2, 1), term(2, 4, 1), term(2, 6, 0), term(2, 8, 0)], m, 1)
}

fn gamma_window(p_residues: &[i64], coef: u64, m: u64) -> Vec<i64> {
    let terms: Vec<_> = p_residues.iter().map(|&p| term(p, coef, 0)).collect();
    exponent_window(&terms, m, 0)
}

fn n5_beta0_space(m: u64) -> Space {
    let ps = odd_residues(m as i64);
    Space::new(Assignment::from([(Symbol::J, 0), (Symbol::Beta, 0)]))
        .dim(Symbol::X, odd_residues(m as i64))
        .dim(Symbol::Alpha, eq7_alpha_window(m))
        .dim(Symbol::P, ps.clone())
        .dim(Symbol::Gamma, gamma_window(&ps, 2, m))
}

/// With `β = 0` the cofactor split forces `j = 0`; reducing the expanded
/// equation mod 8 over odd `x`, odd `p` and every `α >= 1`, `γ >= 0`.
pub fn certify_n5_beta0_mod8() -> Result<ResidueCertificate> {
    n5_beta0_mod8_with_order(false)
}

fn n5_beta0_mod8_with_order(reverse: bool) -> Result<ResidueCertificate> {
    const M: u64 = 8;
    let space = n5_beta0_space(M);
    let (mut lhs, mut rhs) = (BTreeSet::new(), BTreeSet::new());
    let run = space.run(reverse, |a| {
        let l = residue_reduce(PolyId::Eq7Lhs, M, a)?;
        let r = residue_reduce(PolyId::Eq7Rhs, M, a)?;
        lhs.insert(l);
        rhs.insert(r);
        Ok(l == r)
    })?;
    let derived = match (single(&lhs), single(&rhs)) {
        (Some(l), Some(r)) if run.1.is_empty() => {
            Some(format!("LHS ≡ {l}, RHS ≡ {r} (mod {M}) for all odd x"))
        }
        _ => None,
    };
    Ok(cert(BranchId::N5Beta0Mod8, Modulus::Residue(M), run, derived))
}

/// With `β >= 1`, `j = 2β - 1`; mod 3 the right side is always 2 while
/// `p^(2γ)` is a square.
pub fn certify_n5_betapos_mod3() -> Result<ResidueCertificate> {
    n5_betapos_mod3_with_order(false)
}

fn n5_betapos_mod3_with_order(reverse: bool) -> Result<ResidueCertificate> {
    const M: u64 = 3;
    let ps: Vec<i64> = (0..M as i64).collect();
    // exponents of 5 as functions of β, with j = 2β - 1
    let beta_terms =
        [term(5, 2, 0), term(5, 4, -1), term(5, 6, -2), term(5, 8, -3), term(5, 10, -5)];
    let space = Space::new(Assignment::new())
        .dim(Symbol::X, 0..M as i64)
        .dim(Symbol::Alpha, eq7_alpha_window(M))
        .dim(Symbol::Beta, exponent_window(&beta_terms, M, 1))
        .dim(Symbol::P, ps.clone())
        .dim(Symbol::Gamma, gamma_window(&ps, 2, M));
    let (mut rhs, mut p_pow) = (BTreeSet::new(), BTreeSet::new());
    let run = space.run(reverse, |a| {
        let mut a = a.clone();
        a.set(Symbol::J, 2 * a.get(Symbol::Beta)? - 1);
        let l = residue_reduce(PolyId::Eq7Lhs, M, &a)?;
        let r = residue_reduce(PolyId::Eq7Rhs, M, &a)?;
        rhs.insert(r);
        p_pow.insert(residue_reduce(PolyId::Eq7Lhs, M, &a.clone().with(Symbol::Beta, 0))?);
        Ok(l == r)
    })?;
    let derived = match single(&rhs) {
        Some(r) if run.1.is_empty() && !p_pow.contains(&r) => {
            Some(format!("p^{{2γ}} ≡ {r} (mod {M}) is impossible"))
        }
        _ => None,
    };
    Ok(cert(BranchId::N5BetaposMod3, Modulus::Residue(M), run, derived))
}

/// When `5 | z - x^2` (and so `5 ∤ x`), the quartic cofactor is `5 (mod 25)`.
/// Witnesses would be residue pairs where it is not.
pub fn certify_n5_cofactor_mod25() -> Result<ResidueCertificate> {
    const M: u64 = 25;
    let space = Space::new(Assignment::new())
        .dim(Symbol::X, (0..M as i64).filter(|x| x % 5 != 0))
        .dim(Symbol::Z, 0..M as i64);
    let run = space.run(false, |a| {
        let (x, z) = (a.get(Symbol::X)?, a.get(Symbol::Z)?);
        let premise = (z - x * x).rem_euclid(5) == 0;
        Ok(premise && residue_reduce(PolyId::N5Cofactor, M, a)? != 5)
    })?;
    let derived = run
        .1
        .is_empty()
        .then(|| "z ≡ x² (mod 5) ⟹ z⁴ + z³x² + z²x⁴ + zx⁶ + x⁸ ≡ 5 (mod 25)".to_string());
    Ok(cert(BranchId::N5CofactorMod25, Modulus::Residue(M), run, derived))
}

/// `gcd(z - x^2, z^4 + z^3 x^2 + z^2 x^4 + z x^6 + x^8)`, checked against the
/// claim that it is 5 when `5 | z - x^2` and 1 otherwise.
pub fn n5_gcd_classify(x: &BigInt, z: &BigInt) -> Result<BigInt> {
    if !gcd(x, z)?.is_one() {
        return Err(Error::Precondition(format!("gcd({x}, {z}) != 1")));
    }
    if x.is_even() || z.is_even() {
        return Err(Error::Precondition(format!("x = {x} and z = {z} must be odd")));
    }
    let a = x * x;
    let diff = z - &a;
    if diff.is_zero() {
        return Err(Error::Precondition("z - x^2 = 0".into()));
    }
    let cofactor: BigInt = (0..=4u32).map(|i| z.pow(4 - i) * a.pow(i)).sum();
    let g = gcd(&diff, &cofactor)?;
    let five_divides = (&diff % 5u32).is_zero();
    let expected = if five_divides { BigInt::from(5) } else { BigInt::one() };
    if g != expected {
        return Err(Error::Contract(format!(
            "gcd(z - x^2, cofactor) = {g} for x = {x}, z = {z}"
        )));
    }
    Ok(g)
}

/// In the k >= 1 case of `5^k p^ℓ - 2^(4α) 5^(k') p^(ℓ') = 1` the left side is
/// `-1 (mod 5)`, so `k = 0` is forced.
pub fn certify_lemma2_mod5() -> Result<ResidueCertificate> {
    lemma2_mod5_with_order(false)
}

fn lemma2_mod5_with_order(reverse: bool) -> Result<ResidueCertificate> {
    const M: u64 = 5;
    let ps: Vec<i64> = (1..M as i64).collect();
    let space = Space::new(Assignment::from([(Symbol::KPrime, 0)]))
        .dim(Symbol::P, ps.clone())
        .dim(Symbol::Alpha, exponent_window(&[term(2, 4, 0)], M, 1))
        .dim(Symbol::K, exponent_window(&[term(5, 1, 0)], M, 1))
        .dim(Symbol::Gamma, gamma_window(&ps, 4, M))
        .dim(Symbol::Split, [0, 1]);
    let run = space.run(reverse, |a| {
        let mut a = a.clone();
        let four_gamma = 4 * a.get(Symbol::Gamma)?;
        let (l, lp) = if a.get(Symbol::Split)? == 0 { (four_gamma, 0) } else { (0, four_gamma) };
        a.set(Symbol::L, l);
        a.set(Symbol::LPrime, lp);
        Ok(residue_reduce(PolyId::Eq3Lhs, M, &a)? == 1)
    })?;
    let derived = run.1.is_empty().then(|| "k = 0".to_string());
    Ok(cert(BranchId::Lemma2Mod5, Modulus::Residue(M), run, derived))
}

/// Exhaustive scan of `u` odd, `v` even and nonzero, `|u|, |v| <= bound`, for a
/// coprime pair with `v^4 - 10 u^2 v^2 + 5 u^4 = 5`.
pub fn certify_lemma2_quartic5(bound: i64) -> Result<ResidueCertificate> {
    if bound < 1 {
        return Err(Error::Precondition(format!("bound = {bound} must be at least 1")));
    }
    let five = BigInt::from(5);
    let space = Space::new(Assignment::new())
        .dim(Symbol::U, (-bound..=bound).filter(|u| u % 2 != 0))
        .dim(Symbol::V, (-bound..=bound).filter(|v| v % 2 == 0 && *v != 0));
    let run = space.run(false, |a| {
        let (u, v) = (a.get(Symbol::U)?, a.get(Symbol::V)?);
        Ok(num_integer::gcd(u, v) == 1
            && quartic_y(&BigInt::from(u), &BigInt::from(v)) == five)
    })?;
    let derived = run
        .1
        .is_empty()
        .then(|| format!("v⁴ − 10u²v² + 5u⁴ ≠ 5 for |u|, |v| ≤ {bound}"));
    Ok(cert(BranchId::Lemma2Quartic5, Modulus::Integers, run, derived))
}

/// Exhaustive search of `3^(4γ) - 2^(4α) 5^(4β-5) = 1` over
/// `1 <= α <= max_alpha`, `2 <= β <= max_beta`, `1 <= γ <= max_gamma`.
pub fn certify_eq4_search(max_alpha: u32, max_beta: u32, max_gamma: u32) -> Result<ResidueCertificate> {
    if max_alpha < 1 || max_beta < 1 || max_gamma < 1 {
        return Err(Error::Precondition("search bounds must be at least 1".into()));
    }
    let space = Space::new(Assignment::new())
        .dim(Symbol::Alpha, 1..=max_alpha as i64)
        .dim(Symbol::Beta, 2..=max_beta as i64)
        .dim(Symbol::Gamma, 1..=max_gamma as i64);
    let run = space.run(false, |a| {
        let (al, be, ga) = (a.get(Symbol::Alpha)?, a.get(Symbol::Beta)?, a.get(Symbol::Gamma)?);
        let lhs = BigInt::from(3).pow(4 * ga as u32)
            - BigInt::from(2).pow(4 * al as u32) * BigInt::from(5).pow((4 * be - 5) as u32);
        Ok(lhs.is_one())
    })?;
    let derived = run.1.is_empty().then(|| {
        format!(
            "3^{{4γ}} − 2^{{4α}}5^{{4β−5}} ≠ 1 for 1 ≤ α ≤ {max_alpha}, 2 ≤ β ≤ {max_beta}, 1 ≤ γ ≤ {max_gamma}"
        )
    });
    Ok(cert(BranchId::Eq4Search, Modulus::Integers, run, derived))
}

/// The gcd split of `v` against its quartic cofactor, and the resulting shape
/// of `v` and the cofactor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentCase {
    pub five_divides_v: bool,
    pub k: u32,
    pub expected_v_form: SignedMonomial,
    pub expected_quartic_form: SignedMonomial,
}

/// `± Π base^exp`, exponents kept symbolic where the descent leaves them free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedMonomial(pub Vec<(String, String)>);

impl fmt::Display for SignedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("±")?;
        for (i, (b, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            write!(f, "{b}^{e}")?;
        }
        Ok(())
    }
}

impl DescentCase {
    /// `|v| = 2^α 5^k`.
    pub fn v_magnitude(&self, alpha: u32) -> BigInt {
        BigInt::from(2).pow(alpha) * BigInt::from(5).pow(self.k)
    }

    /// `|v^4 - 10 u^2 v^2 + 5 u^4| = 5^(β-k) p^γ`.
    pub fn quartic_magnitude(&self, beta: u32, p: &BigInt, gamma: u32) -> BigInt {
        BigInt::from(5).pow(beta - self.k) * p.pow(gamma)
    }
}

/// Splits on whether 5 divides `v`, after checking
/// `gcd(v, v^4 - 10 u^2 v^2 + 5 u^4) = gcd(v, 5)`.
pub fn descent_split(u: &BigInt, v: &BigInt, beta: u32) -> Result<DescentCase> {
    if !gcd(u, v)?.is_one() || u.is_even() || v.is_odd() {
        return Err(Error::Precondition(format!(
            "(u, v) = ({u}, {v}) must be coprime with u odd, v even"
        )));
    }
    let g = gcd(v, &quartic_y(u, v))?;
    let g5 = gcd(v, &BigInt::from(5))?;
    if g != g5 {
        return Err(Error::Contract(format!("gcd(v, quartic_y) = {g} != gcd(v, 5) = {g5}")));
    }
    let five_divides_v = g == BigInt::from(5);
    let k = if five_divides_v {
        beta.checked_sub(1)
            .ok_or_else(|| Error::Precondition("5 | v requires beta >= 1".into()))?
    } else {
        0
    };
    let mono = |parts: &[(&str, String)]| {
        SignedMonomial(parts.iter().map(|(b, e)| (b.to_string(), e.clone())).collect())
    };
    Ok(DescentCase {
        five_divides_v,
        k,
        expected_v_form: mono(&[("2", "α".into()), ("5", k.to_string())]),
        expected_quartic_form: mono(&[("5", (beta - k).to_string()), ("p", "γ".into())]),
    })
}

/// In the `5 | u` branch, `u^4 - 10 u^2 v^2 + 5 v^4 = 5 B₁^n`; over `u` odd,
/// `v` even mod 8 this pins down `B₁^n mod 8`.
pub fn certify_u5_mod8() -> Result<ResidueCertificate> {
    u5_mod8_with_order(false)
}

fn u5_mod8_with_order(reverse: bool) -> Result<ResidueCertificate> {
    const M: u64 = 8;
    let space = Space::new(Assignment::new())
        .dim(Symbol::U, odd_residues(M as i64))
        .dim(Symbol::V, even_residues(M as i64))
        .dim(Symbol::BPow, 0..M as i64);
    let run = space.run(reverse, |a| {
        Ok(residue_reduce(PolyId::QuarticX, M, a)? == residue_reduce(PolyId::FiveBPow, M, a)?)
    })?;
    let b: BTreeSet<i64> = run.1.iter().filter_map(|w| w.get(Symbol::BPow)).collect();
    let derived = single(&b).map(|r| format!("B₁ⁿ ≡ {r} (mod {M})"));
    Ok(cert(BranchId::U5Mod8, Modulus::Residue(M), run, derived))
}

fn n7_space(m: u64, u: Vec<i64>, v: Vec<i64>) -> Space {
    Space::new(Assignment::from([(Symbol::N, 7)]))
        .dim(Symbol::B, 0..m as i64)
        .dim(Symbol::Alpha, exponent_window(&[term(2, 4, 2)], m, 1))
        .dim(Symbol::K, exponent_window(&[term(5, 4, 1)], m, 0))
        .dim(Symbol::U, u)
        .dim(Symbol::V, v)
}

fn n7_constraint(run: &(u64, Vec<Witness>), m: u64) -> Option<String> {
    let b: BTreeSet<i64> = run.1.iter().filter_map(|w| w.get(Symbol::B)).collect();
    single(&b).map(|r| format!("B₂ ≡ {r} (mod {m})"))
}

/// `B₂^7 + 2^(4α+2) 5^(4k+1) = w₂^2` with `w₂ = u^2 - 5 v^2` mod 3, over pairs
/// `(u, v)` not both divisible by 3.
pub fn certify_n7_mod3() -> Result<ResidueCertificate> {
    n7_mod3_with_order(false)
}

fn n7_mod3_with_order(reverse: bool) -> Result<ResidueCertificate> {
    const M: u64 = 3;
    let space = n7_space(M, (0..3).collect(), (0..3).collect());
    let run = space.run(reverse, |a| {
        let coprime = (a.get(Symbol::U)?, a.get(Symbol::V)?) != (0, 0);
        Ok(coprime
            && residue_reduce(PolyId::Eq16Lhs, M, a)? == residue_reduce(PolyId::W2Squared, M, a)?)
    })?;
    let derived = n7_constraint(&run, M);
    Ok(cert(BranchId::Not5uN7Mod3, Modulus::Residue(M), run, derived))
}

/// The same equation mod 8 with `u` odd and `v` even.
pub fn certify_n7_mod8() -> Result<ResidueCertificate> {
    n7_mod8_with_order(false)
}

fn n7_mod8_with_order(reverse: bool) -> Result<ResidueCertificate> {
    const M: u64 = 8;
    let space = n7_space(M, odd_residues(8), even_residues(8));
    let run = space.run(reverse, |a| {
        Ok(residue_reduce(PolyId::Eq16Lhs, M, a)? == residue_reduce(PolyId::W2Squared, M, a)?)
    })?;
    let derived = n7_constraint(&run, M);
    Ok(cert(BranchId::Not5uN7Mod8, Modulus::Residue(M), run, derived))
}

/// Both n = 7 sub-certificates: `(mod 3, mod 8)`.
pub fn certify_n7_congruences() -> Result<(ResidueCertificate, ResidueCertificate)> {
    Ok((certify_n7_mod3()?, certify_n7_mod8()?))
}
