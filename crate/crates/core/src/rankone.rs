//! Rank-one étale modules `M_{Cc⃗}`: normal forms, their `κ` matrices, inertial
//! exponents, and the weight profiles and twist factors used to test boundedness.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{internal, invalid, Result};
use crate::field::{Field, FieldElement};
use crate::series::LaurentSeries;
use crate::tate::{GammaElement, PhiTwist, TateElement, TateRing};

/// The module with `φ(e) = (Cπ^{(p−1)c_0}, π^{(p−1)c_1}, …)e`.
#[derive(Clone, PartialEq, Eq)]
pub struct RankOneModule {
    field: Field,
    c_const: FieldElement,
    digits: Vec<u32>,
}

impl fmt::Debug for RankOneModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M[C = {}, c = {:?}]", self.field.display(self.c_const), self.digits)
    }
}

/// `Σ_l(v) = Σ_j v_{l+j} p^j` with indices mod `f`.
pub fn twisted_digit_sum(v: &[i64], p: u32, l: usize) -> i64 {
    let f = v.len();
    (0..f).map(|j| v[(l + j) % f] * (p as i64).pow(j as u32)).sum()
}

impl RankOneModule {
    /// The module for `C ≠ 0` and digits `0 ≤ c_i ≤ p−1`, not all equal to `p−1`.
    pub fn new(field: &Field, c_const: FieldElement, digits: &[u32]) -> Result<Self> {
        let p = field.p();
        if c_const.is_zero() {
            return Err(invalid("C must be nonzero"));
        }
        if digits.len() != field.f() {
            return Err(invalid(format!("expected {} digits, got {}", field.f(), digits.len())));
        }
        if digits.iter().any(|&d| d >= p) {
            return Err(invalid("digits must lie in [0, p−1]"));
        }
        if digits.iter().all(|&d| d == p - 1) {
            return Err(invalid("the all-(p−1) digit vector is not a normal form"));
        }
        Ok(Self {
            field: field.clone(),
            c_const,
            digits: digits.to_vec(),
        })
    }

    /// Normal form of the module with `Σ_0(c⃗) ≡ n mod p^f − 1`.
    pub fn normal_form(field: &Field, c_const: FieldElement, n: i64) -> Result<Self> {
        let p = field.p() as i64;
        let f = field.f();
        let modulus = p.pow(f as u32) - 1;
        let mut r = n.rem_euclid(modulus);
        let mut digits = Vec::with_capacity(f);
        for _ in 0..f {
            digits.push((r % p) as u32);
            r /= p;
        }
        Self::new(field, c_const, &digits)
    }

    /// The coefficient field.
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// The unramified constant `C`.
    pub fn c_const(&self) -> FieldElement {
        self.c_const
    }

    /// The digit vector `c⃗`.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Number of embeddings.
    pub fn f(&self) -> usize {
        self.digits.len()
    }

    /// The prime.
    pub fn p(&self) -> u32 {
        self.field.p()
    }

    /// Digits as signed integers.
    pub fn digits_i64(&self) -> Vec<i64> {
        self.digits.iter().map(|&d| d as i64).collect()
    }

    /// `Σ_l(c⃗)`.
    pub fn sigma(&self, l: usize) -> i64 {
        twisted_digit_sum(&self.digits_i64(), self.p(), l % self.f())
    }

    /// Whether `C = 1` and `c⃗ = 0⃗`.
    pub fn is_trivial(&self) -> bool {
        self.c_const == FieldElement::ONE && self.digits.iter().all(|&d| d == 0)
    }

    /// Whether `p > 2`, `C = 1` and `c⃗ = (p−2, …, p−2)`.
    pub fn is_cyclotomic(&self) -> bool {
        let p = self.p();
        p > 2 && self.c_const == FieldElement::ONE && self.digits.iter().all(|&d| d == p - 2)
    }

    /// `dim Ext¹(M_0, M)`: `f+1` in the trivial and cyclotomic cases for odd `p`,
    /// `f+2` for the trivial module when `p = 2`, and `f` otherwise.
    pub fn ext1_dimension(&self) -> usize {
        let f = self.f();
        if self.is_trivial() {
            if self.p() == 2 {
                f + 2
            } else {
                f + 1
            }
        } else if self.is_cyclotomic() {
            f + 1
        } else {
            f
        }
    }

    /// Isomorphism test: equal `C` and `Σ_0` congruent mod `p^f − 1`.
    pub fn is_isomorphic(&self, other: &Self) -> bool {
        let m = (self.p() as i64).pow(self.f() as u32) - 1;
        self.c_const == other.c_const && (self.sigma(0) - other.sigma(0)).rem_euclid(m) == 0
    }

    /// Exponent of `ω_{τ_i}` in the restriction to inertia: `−c_{i−1}`, in `(−p^f+1, 0]`.
    pub fn fundamental_character_exponents(&self) -> Vec<i64> {
        let f = self.f();
        (0..f).map(|i| -(self.digits[(i + f - 1) % f] as i64)).collect()
    }

    /// Exponents `(p−1)c_i` of `κ_φ`.
    pub fn phi_exponents(&self) -> Vec<i64> {
        let p = self.p() as i64;
        self.digits.iter().map(|&d| (p - 1) * d as i64).collect()
    }

    /// `κ_φ` as a solver twist.
    pub fn phi_twist<'a>(&self, exps: &'a [i64]) -> PhiTwist<'a> {
        PhiTwist { c: self.c_const, exps }
    }

    /// `κ_φ = (Cπ^{(p−1)c_0}, π^{(p−1)c_1}, …)` at the given order.
    pub fn kappa_phi(&self, order: i64) -> TateElement {
        kappa_phi_for(&self.field, self.c_const, &self.phi_exponents(), order)
    }

    /// `κ_γ = (λ_γ^{Σ_0}, …, λ_γ^{Σ_{f−1}})` at the ring's working order.
    pub fn kappa_gamma(&self, ring: &TateRing, g: &GammaElement, order: i64) -> Result<TateElement> {
        kappa_gamma_for(
            ring,
            g,
            &(0..self.f()).map(|l| self.sigma(l)).collect::<Vec<_>>(),
            order,
        )
    }
}

/// `(Cπ^{e_0}, π^{e_1}, …)`.
pub fn kappa_phi_for(field: &Field, c: FieldElement, exps: &[i64], order: i64) -> TateElement {
    TateElement::new(
        exps.iter()
            .enumerate()
            .map(|(i, &e)| LaurentSeries::monomial(field, if i == 0 { c } else { field.one() }, e, order + e))
            .collect(),
    )
}

/// `(λ_γ^{s_0}, …, λ_γ^{s_{f−1}})`.
pub fn kappa_gamma_for(ring: &TateRing, g: &GammaElement, sigmas: &[i64], order: i64) -> Result<TateElement> {
    let lam = ring.lambda(g, order)?;
    let comps = sigmas.iter().map(|&s| lam.pow(s)).collect::<Result<Vec<_>>>()?;
    Ok(TateElement::new(comps))
}

/// Which of the two weight solutions a profile is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    /// The congruence has a single solution.
    Unique,
    /// All `a_i = p` and all `b_j = 1`.
    Plus,
    /// All `a_i = 1` and all `b_j = p`.
    Minus,
}

/// A solution `(a⃗, b⃗)` of `Σ_{j∉J} b_j p^j − Σ_{i∈J} a_i p^i ≡ Σ_0(c⃗) mod p^f − 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightProfile {
    /// The subset `J ⊆ S`.
    pub j: BTreeSet<usize>,
    /// `a_i ∈ [1, p]` for `i ∈ J`, zero elsewhere.
    pub a: Vec<i64>,
    /// `b_i ∈ [1, p]` for `i ∉ J`, zero elsewhere.
    pub b: Vec<i64>,
    /// Position among the solutions.
    pub sign: Sign,
}

impl WeightProfile {
    /// `d_i = −a_i` for `i ∈ J` and `b_i` otherwise.
    pub fn d(&self) -> Vec<i64> {
        self.a.iter().zip(&self.b).map(|(&a, &b)| b - a).collect()
    }
}

/// All weight profiles of `m` for the subset `j`, found by enumeration.
pub fn weight_profiles(m: &RankOneModule, j: &BTreeSet<usize>) -> Result<Vec<WeightProfile>> {
    let p = m.p() as i64;
    let f = m.f();
    if j.iter().any(|&i| i >= f) {
        return Err(invalid("subset index out of range"));
    }
    let modulus = p.pow(f as u32) - 1;
    let target = m.sigma(0).rem_euclid(modulus);
    let mut found = Vec::new();
    let total = (p as u64).pow(f as u32);
    for code in 0..total {
        let mut x = code;
        let mut a = vec![0i64; f];
        let mut b = vec![0i64; f];
        let mut n = 0i64;
        for i in 0..f {
            let w = (x % p as u64) as i64 + 1;
            x /= p as u64;
            if j.contains(&i) {
                a[i] = w;
                n -= w * p.pow(i as u32);
            } else {
                b[i] = w;
                n += w * p.pow(i as u32);
            }
        }
        if n.rem_euclid(modulus) == target {
            found.push((a, b));
        }
    }
    let plus = |a: &[i64], b: &[i64]| (0..f).all(|i| if j.contains(&i) { a[i] == p } else { b[i] == 1 });
    let minus = |a: &[i64], b: &[i64]| (0..f).all(|i| if j.contains(&i) { a[i] == 1 } else { b[i] == p });
    match found.len() {
        1 => {
            let (a, b) = found.pop().expect("one solution");
            Ok(vec![WeightProfile {
                j: j.clone(),
                a,
                b,
                sign: Sign::Unique,
            }])
        }
        2 => {
            let mut out = Vec::new();
            for (a, b) in found {
                let sign = if plus(&a, &b) {
                    Sign::Plus
                } else if minus(&a, &b) {
                    Sign::Minus
                } else {
                    return Err(internal("two weight solutions that are not the ± pair"));
                };
                out.push(WeightProfile {
                    j: j.clone(),
                    a,
                    b,
                    sign,
                });
            }
            out.sort_by_key(|w| w.sign);
            Ok(out)
        }
        n => Err(internal(format!("{n} weight solutions; expected one or two"))),
    }
}

/// `n_J = Σ_{i∈J} p^{i+1} − Σ_{i∉J} p^i`.
pub fn n_j(p: u32, f: usize, j: &BTreeSet<usize>) -> i64 {
    let p = p as i64;
    (0..f)
        .map(|i| {
            if j.contains(&i) {
                p.pow(i as u32 + 1)
            } else {
                -p.pow(i as u32)
            }
        })
        .sum()
}

/// At a double-solution locus, reports `+1` if `Σ_0(c⃗) ≡ n_J`, `−1` if `≡ −n_J`,
/// `0` if both hold; `None` when the profile is unique.
pub fn double_locus_sign(m: &RankOneModule, j: &BTreeSet<usize>) -> Result<Option<i8>> {
    if weight_profiles(m, j)?.len() != 2 {
        return Ok(None);
    }
    let modulus = (m.p() as i64).pow(m.f() as u32) - 1;
    let n = n_j(m.p(), m.f(), j);
    let s = m.sigma(0);
    let pos = (s - n).rem_euclid(modulus) == 0;
    let neg = (s + n).rem_euclid(modulus) == 0;
    Ok(Some(match (pos, neg) {
        (true, true) => 0,
        (true, false) => 1,
        (false, true) => -1,
        (false, false) => return Err(internal("double locus matches neither ±n_J")),
    }))
}

/// The exponents `ε_i = Σ_i(c⃗ − d⃗)/(p^f − 1)` of the twist factor.
pub fn twist_exponents(m: &RankOneModule, prof: &WeightProfile) -> Result<Vec<i64>> {
    let p = m.p();
    let f = m.f();
    let modulus = (p as i64).pow(f as u32) - 1;
    let diff: Vec<i64> = m.digits_i64().iter().zip(prof.d()).map(|(c, d)| c - d).collect();
    (0..f)
        .map(|i| {
            let s = twisted_digit_sum(&diff, p, i);
            if s % modulus != 0 {
                Err(internal(format!(
                    "twist exponent Σ_{i} = {s} not divisible by {modulus}"
                )))
            } else {
                Ok(s / modulus)
            }
        })
        .collect()
}

/// `⟨c⃗⟩_J = (π^{(p−1)ε_0}, …, π^{(p−1)ε_{f−1}})`.
pub fn twist_factor(m: &RankOneModule, prof: &WeightProfile, order: i64) -> Result<TateElement> {
    let p = m.p() as i64;
    let eps = twist_exponents(m, prof)?;
    let field = m.field();
    Ok(TateElement::new(
        eps.iter()
            .map(|&e| LaurentSeries::monomial(field, field.one(), (p - 1) * e, order + (p - 1) * e))
            .collect(),
    ))
}

/// Every subset of `{0, …, f−1}`, ordered by size then lexicographically.
pub fn all_subsets(f: usize) -> Vec<BTreeSet<usize>> {
    let mut out: Vec<BTreeSet<usize>> = (0..1u32 << f)
        .map(|mask| (0..f).filter(|i| mask >> i & 1 == 1).collect())
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tate::Precision;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn normal_forms() {
        let f = Field::with_degrees(3, 2, 2).unwrap();
        let m = RankOneModule::normal_form(&f, f.one(), 5).unwrap();
        assert_eq!(m.digits(), &[2, 1]);
        let z = RankOneModule::normal_form(&f, f.one(), 0).unwrap();
        assert_eq!(z.digits(), &[0, 0]);
        let m2 = RankOneModule::normal_form(&f, f.one(), 5 + 8).unwrap();
        assert!(m.is_isomorphic(&m2));
        assert!(RankOneModule::new(&f, f.one(), &[2, 2]).is_err());
    }

    #[test]
    fn profiles() {
        let f5 = Field::with_degrees(5, 2, 2).unwrap();
        let m = RankOneModule::new(&f5, f5.one(), &[3, 3]).unwrap();
        let ps = weight_profiles(&m, &set(&[0, 1])).unwrap();
        assert_eq!(ps.len(), 2);
        assert_eq!(ps[0].a, vec![5, 5]);
        assert_eq!(ps[0].sign, Sign::Plus);
        assert_eq!(ps[1].a, vec![1, 1]);

        let f53 = Field::with_degrees(5, 3, 3).unwrap();
        let m = RankOneModule::new(&f53, f53.one(), &[1, 2, 3]).unwrap();
        assert_eq!(weight_profiles(&m, &set(&[0])).unwrap().len(), 1);

        let f3 = Field::with_degrees(3, 2, 2).unwrap();
        let m = RankOneModule::new(&f3, f3.one(), &[1, 1]).unwrap();
        let ps = weight_profiles(&m, &set(&[])).unwrap();
        assert_eq!(ps.len(), 2);
        assert_eq!(ps[0].b, vec![1, 1]);
        assert_eq!(ps[1].b, vec![3, 3]);
    }

    #[test]
    fn twist_factors() {
        let p = 5;
        let f5 = Field::with_degrees(p, 2, 2).unwrap();
        for c1 in 0..p - 2 {
            let m = RankOneModule::new(&f5, f5.one(), &[p - 1, c1]).unwrap();
            let prof = &weight_profiles(&m, &set(&[0, 1])).unwrap()[0];
            assert_eq!(twist_exponents(&m, prof).unwrap(), vec![1, 2]);
        }
        let m = RankOneModule::new(&f5, f5.one(), &[2, 3]).unwrap();
        let prof = &weight_profiles(&m, &set(&[])).unwrap()[0];
        assert_eq!(twist_exponents(&m, prof).unwrap(), vec![0, 0]);
    }

    #[test]
    fn inertial_exponents() {
        let f = Field::with_degrees(3, 2, 2).unwrap();
        let m = RankOneModule::new(&f, f.one(), &[1, 0]).unwrap();
        assert_eq!(m.fundamental_character_exponents(), vec![0, -1]);
    }

    #[test]
    fn kappa_commutation() {
        let field = Field::with_degrees(3, 2, 2).unwrap();
        let ring = TateRing::new(&field, Precision::default_for(3, 2)).unwrap();
        let m = RankOneModule::new(&field, field.primitive(), &[2, 1]).unwrap();
        let order = 60;
        let g = ring.eta();
        let kp = m.kappa_phi(order);
        let kg = m.kappa_gamma(&ring, &g, order).unwrap();
        let lhs = kp.mul(&ring.phi_act(&kg));
        let rhs = kg.mul(&ring.gamma_act(&g, &kp).unwrap());
        assert!(lhs.agrees_with(&rhs, order));
    }
}
