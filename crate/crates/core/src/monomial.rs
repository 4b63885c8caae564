//! C-monomial ideals `(a_1 U_1, ..., a_c U_c)` in `Z[X_1..X_n]` and the
//! monomial combinatorics built on them: radicals, irreducible
//! decompositions, associated primes and sign-pattern blocks of `Z^n`.
//!
//! Variables are indexed from 0 in code and printed from 1 (`X1`, `X2`, ...).

use std::collections::BTreeSet;
use std::fmt;

use num::{BigInt, Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponents of a monomial, or a multidegree `u` in `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<i64>);

impl ExponentVector {
    pub fn new(entries: Vec<i64>) -> Self {
        ExponentVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// Variables carrying a positive exponent.
    pub fn support(&self) -> BTreeSet<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn divides(&self, other: &ExponentVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        ExponentVector(v)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// One generator `a U`. The coefficient is stored as `|a|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub coefficient: BigInt,
    pub monomial: ExponentVector,
}

impl Generator {
    pub fn is_unit(&self) -> bool {
        self.coefficient.is_one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CMonomialIdeal {
    n: usize,
    generators: Vec<Generator>,
}

impl CMonomialIdeal {
    /// Validates a presentation and normalizes coefficient signs.
    ///
    /// Generators are kept in the given order and never merged, since the
    /// Čech complex is built on the presentation itself.
    pub fn new<C: Into<BigInt>>(n: usize, generators: Vec<(C, Vec<i64>)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoVariables);
        }
        if generators.is_empty() {
            return Err(Error::EmptyGeneratorList);
        }
        let mut gens = Vec::with_capacity(generators.len());
        for (index, (coefficient, exponents)) in generators.into_iter().enumerate() {
            let coefficient: BigInt = coefficient.into();
            if exponents.len() != n {
                return Err(Error::LengthMismatch {
                    what: format!("generator {index} exponents"),
                    expected: n,
                    found: exponents.len(),
                });
            }
            if coefficient.is_zero() {
                return Err(Error::ZeroCoefficient { index });
            }
            if let Some((variable, &exponent)) = exponents.iter().enumerate().find(|(_, &e)| e < 0)
            {
                return Err(Error::NegativeExponent {
                    index,
                    variable,
                    exponent,
                });
            }
            if exponents.iter().all(|&e| e == 0) {
                return Err(Error::ConstantMonomial { index });
            }
            gens.push(Generator {
                coefficient: coefficient.abs(),
                monomial: ExponentVector(exponents),
            });
        }
        Ok(CMonomialIdeal {
            n,
            generators: gens,
        })
    }

    /// A usual monomial ideal from exponent vectors alone.
    pub fn usual(n: usize, monomials: Vec<Vec<i64>>) -> Result<Self> {
        Self::new(n, monomials.into_iter().map(|m| (1, m)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of generators `c`.
    pub fn c(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Per-generator "unit coefficient" flags (usual-monomial generators).
    pub fn unit_flags(&self) -> Vec<bool> {
        self.generators.iter().map(Generator::is_unit).collect()
    }

    /// Re-checks the invariants; a constructed ideal always passes.
    pub fn validate(&self) -> Result<&Self> {
        Self::new(
            self.n,
            self.generators
                .iter()
                .map(|g| (g.coefficient.clone(), g.monomial.0.clone()))
                .collect(),
        )?;
        Ok(self)
    }

    pub fn is_usual(&self) -> bool {
        self.generators.iter().all(Generator::is_unit)
    }

    /// `theta = a_1 ... a_c`.
    pub fn theta(&self) -> BigInt {
        self.generators
            .iter()
            .map(|g| g.coefficient.clone())
            .product()
    }

    /// Merges generators sharing a monomial into one with the gcd of their
    /// coefficients: `(aU, a'U) = (gcd(a, a')U)`.
    pub fn simplified(&self) -> Self {
        let mut out: Vec<Generator> = Vec::new();
        for g in &self.generators {
            match out.iter_mut().find(|h| h.monomial == g.monomial) {
                Some(h) => h.coefficient = h.coefficient.gcd(&g.coefficient),
                None => out.push(g.clone()),
            }
        }
        CMonomialIdeal {
            n: self.n,
            generators: out,
        }
    }

    fn monomials(&self) -> Vec<ExponentVector> {
        self.generators.iter().map(|g| g.monomial.clone()).collect()
    }

    /// Membership of a monomial in a usual monomial ideal.
    pub fn contains_monomial(&self, m: &ExponentVector) -> Result<bool> {
        self.require_usual()?;
        Ok(self.generators.iter().any(|g| g.monomial.divides(m)))
    }

    fn require_usual(&self) -> Result<()> {
        if self.is_usual() {
            Ok(())
        } else {
            Err(Error::NotUsual)
        }
    }

    /// The squarefree ideal generated by the supports of the generators,
    /// with redundant generators removed.
    pub fn radical_usual(&self) -> Result<Self> {
        self.require_usual()?;
        let squarefree = self
            .monomials()
            .into_iter()
            .map(|m| ExponentVector(m.0.iter().map(|&e| i64::from(e > 0)).collect()))
            .collect();
        Ok(Self::from_monomials(self.n, minimalize(squarefree)))
    }

    /// Irredundant decomposition into ideals generated by pure powers of
    /// variables, sorted lexicographically.
    ///
    /// Splits the first generator with at least two variables at its
    /// lowest-index variable, `I = (I + X_i^e) ∩ (I + U / X_i^e)`, until
    /// every generator is a pure power.
    pub fn primary_decompose(&self) -> Result<Vec<Self>> {
        self.require_usual()?;
        let mut leaves = Vec::new();
        split_components(self.monomials(), &mut leaves);
        leaves.sort();
        leaves.dedup();
        let mut irredundant: Vec<Vec<(usize, i64)>> = leaves
            .iter()
            .enumerate()
            .filter(|(k, q)| {
                !leaves
                    .iter()
                    .enumerate()
                    .any(|(j, other)| j != *k && ideal_contains(q, other))
            })
            .map(|(_, q)| pure_powers(q))
            .collect();
        irredundant.sort();
        Ok(irredundant
            .into_iter()
            .map(|q| {
                let monomials = q
                    .into_iter()
                    .map(|(var, e)| {
                        let mut m = ExponentVector::zeros(self.n);
                        m.0[var] = e;
                        m
                    })
                    .collect();
                Self::from_monomials(self.n, monomials)
            })
            .collect())
    }

    pub fn associated_primes(&self) -> Result<BTreeSet<MonomialPrime>> {
        Ok(self
            .primary_decompose()?
            .iter()
            .map(|q| MonomialPrime {
                variables: q
                    .generators
                    .iter()
                    .flat_map(|g| g.monomial.support())
                    .collect(),
            })
            .collect())
    }

    /// Height of a usual monomial ideal: the smallest associated prime.
    pub fn height(&self) -> Result<usize> {
        Ok(self
            .associated_primes()?
            .iter()
            .map(|p| p.variables.len())
            .min()
            .unwrap_or(0))
    }

    fn from_monomials(n: usize, monomials: Vec<ExponentVector>) -> Self {
        CMonomialIdeal {
            n,
            generators: monomials
                .into_iter()
                .map(|m| Generator {
                    coefficient: BigInt::one(),
                    monomial: m,
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: IdealFile = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        file.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&IdealFile::from(self)).expect("ideal serializes")
    }
}

impl fmt::Display for CMonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, g) in self.generators.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            if !g.coefficient.is_one() {
                write!(f, "{}", g.coefficient)?;
            }
            for (i, &e) in g.monomial.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "X{}", i + 1)?,
                    _ => write!(f, "X{}^{}", i + 1, e)?,
                }
            }
        }
        write!(f, ")")
    }
}

/// Drop duplicates and generators divisible by another generator; sort.
fn minimalize(mut gens: Vec<ExponentVector>) -> Vec<ExponentVector> {
    gens.sort();
    gens.dedup();
    let keep: Vec<ExponentVector> = gens
        .iter()
        .enumerate()
        .filter(|(k, g)| {
            !gens
                .iter()
                .enumerate()
                .any(|(j, h)| j != *k && h.divides(g))
        })
        .map(|(_, g)| g.clone())
        .collect();
    keep
}

fn split_components(gens: Vec<ExponentVector>, out: &mut Vec<Vec<ExponentVector>>) {
    let gens = minimalize(gens);
    let Some(mixed) = gens.iter().find(|g| g.support().len() >= 2) else {
        out.push(gens);
        return;
    };
    let var = *mixed.support().first().expect("mixed support is nonempty");
    let mut pure = ExponentVector::zeros(mixed.len());
    pure.0[var] = mixed.0[var];
    let mut rest = mixed.clone();
    rest.0[var] = 0;
    let mut left = gens.clone();
    left.push(pure);
    let mut right = gens;
    right.push(rest);
    split_components(left, out);
    split_components(right, out);
}

/// A component generated by pure powers, as `(variable, exponent)` pairs
/// sorted by variable.
fn pure_powers(gens: &[ExponentVector]) -> Vec<(usize, i64)> {
    let mut out: Vec<(usize, i64)> = gens
        .iter()
        .map(|g| {
            let var = *g.support().first().expect("nonconstant generator");
            (var, g.0[var])
        })
        .collect();
    out.sort();
    out
}

/// `small ⊆ big` for monomial ideals given by generators.
fn ideal_contains(big: &[ExponentVector], small: &[ExponentVector]) -> bool {
    small.iter().all(|m| big.iter().any(|g| g.divides(m)))
}

/// A monomial prime `(X_{i_1}, ..., X_{i_t})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialPrime {
    pub variables: BTreeSet<usize>,
}

impl fmt::Display for MonomialPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self
            .variables
            .iter()
            .map(|i| format!("X{}", i + 1))
            .collect();
        write!(f, "({})", names.join(", "))
    }
}

/// A sign-pattern region of `Z^n`: `u_i >= 0` on the nonnegative
/// coordinates and `u_i <= -1` elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    nonneg: Vec<bool>,
}

impl Block {
    pub fn new(nonneg: Vec<bool>) -> Self {
        Block { nonneg }
    }

    pub fn of(u: &ExponentVector) -> Self {
        Block {
            nonneg: u.0.iter().map(|&e| e >= 0).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.nonneg.len()
    }

    pub fn is_nonneg(&self, i: usize) -> bool {
        self.nonneg[i]
    }

    pub fn nonneg_set(&self) -> BTreeSet<usize> {
        (0..self.n()).filter(|&i| self.nonneg[i]).collect()
    }

    /// Canonical degree in `{0, -1}^n`.
    pub fn representative(&self) -> ExponentVector {
        ExponentVector(
            self.nonneg
                .iter()
                .map(|&nn| if nn { 0 } else { -1 })
                .collect(),
        )
    }

    pub fn contains(&self, u: &ExponentVector) -> bool {
        u.len() == self.n() && Block::of(u) == *self
    }

    /// Sign string such as `"+-"` (`u_1 >= 0`, `u_2 <= -1`).
    pub fn pattern(&self) -> String {
        self.nonneg
            .iter()
            .map(|&nn| if nn { '+' } else { '-' })
            .collect()
    }

    pub fn from_pattern(s: &str) -> Option<Self> {
        s.chars()
            .map(|ch| match ch {
                '+' => Some(true),
                '-' => Some(false),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Block::new)
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pattern())
    }
}

/// All `2^n` blocks, `+` before `-` with the first coordinate most significant.
pub fn blocks(n: usize) -> Vec<Block> {
    (0..1usize << n)
        .map(|mask| Block {
            nonneg: (0..n).map(|i| mask & (1 << (n - 1 - i)) == 0).collect(),
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IdealFile {
    variables: usize,
    generators: Vec<GeneratorFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorFile {
    coefficient: String,
    exponents: Vec<i64>,
}

impl TryFrom<IdealFile> for CMonomialIdeal {
    type Error = Error;

    fn try_from(file: IdealFile) -> Result<Self> {
        let gens = file
            .generators
            .into_iter()
            .enumerate()
            .map(|(index, g)| {
                let c: BigInt =
                    g.coefficient
                        .trim()
                        .parse()
                        .map_err(|_| Error::BadCoefficient {
                            index,
                            text: g.coefficient.clone(),
                        })?;
                Ok((c, g.exponents))
            })
            .collect::<Result<Vec<_>>>()?;
        CMonomialIdeal::new(file.variables, gens)
    }
}

impl From<&CMonomialIdeal> for IdealFile {
    fn from(ideal: &CMonomialIdeal) -> Self {
        IdealFile {
            variables: ideal.n,
            generators: ideal
                .generators
                .iter()
                .map(|g| GeneratorFile {
                    coefficient: g.coefficient.to_string(),
                    exponents: g.monomial.0.clone(),
                })
                .collect(),
        }
    }
}
