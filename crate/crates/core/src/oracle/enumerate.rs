use std::collections::HashSet;

use super::{Oracle, OracleConfig, OracleError, TruthVector};
use crate::bits::Bits;
use crate::model::KripkeModel;
use crate::semantics::slot_names;
use crate::syntax::{Feature, FeatureSet, HybridFormula};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representative {
    pub formula: HybridFormula,
    pub vector: TruthVector,
    pub size: usize,
    /// Least degree at which this vector (with this openness) occurs.
    pub stratum: usize,
    pub sentence: bool,
}

/// The representatives first found at one degree.
#[derive(Debug, Clone, Copy)]
pub struct Stratum<'e> {
    pub degree: usize,
    /// Number of context classes at this degree; the degree admits
    /// `2^classes` distinct vectors in total.
    pub classes: usize,
    pub representatives: &'e [Representative],
}

impl Stratum<'_> {
    pub fn vector_count(&self) -> Option<u128> {
        1u128.checked_shl(self.classes as u32)
    }
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub k: usize,
    classes: Vec<usize>,
    representatives: Vec<Representative>,
    starts: Vec<usize>,
}

impl Enumeration {
    pub fn depth(&self) -> usize {
        self.classes.len() - 1
    }

    pub fn stratum(&self, d: usize) -> Stratum<'_> {
        let end = self.starts.get(d + 1).copied().unwrap_or(self.representatives.len());
        Stratum {
            degree: d,
            classes: self.classes[d],
            representatives: &self.representatives[self.starts[d]..end],
        }
    }

    pub fn strata(&self) -> impl Iterator<Item = Stratum<'_>> {
        (0..self.classes.len()).map(|d| self.stratum(d))
    }

    /// Every representative of degree at most `d`.
    pub fn up_to(&self, d: usize) -> impl Iterator<Item = &Representative> {
        let end = self.starts.get(d + 1).copied().unwrap_or(self.representatives.len());
        self.representatives[..end].iter()
    }

    pub fn representatives(&self) -> &[Representative] {
        &self.representatives
    }

    pub fn sentences(&self) -> impl Iterator<Item = &Representative> {
        self.representatives.iter().filter(|r| r.sentence)
    }
}

/// Representatives of strata `0..=l` over the contexts of `models`, with
/// world variables `x1..xk`.
pub fn enumerate(
    models: &[&KripkeModel],
    features: FeatureSet,
    k: usize,
    l: usize,
    config: &OracleConfig,
) -> Result<Enumeration, OracleError> {
    let oracle = Oracle::new(models, features, k, config.cap)?;
    enumerate_oracle(&oracle, l, config)
}

struct Builder<'o, 'a> {
    oracle: &'o Oracle<'a>,
    config: OracleConfig,
    vars: Vec<String>,
    reps: Vec<Representative>,
    seen: HashSet<(TruthVector, bool)>,
    /// `by_size[s]`: indices of representatives of size `s`, in order.
    by_size: Vec<Vec<usize>>,
    stratum: usize,
}

impl Builder<'_, '_> {
    fn offer(&mut self, formula: HybridFormula, vector: Bits) -> Result<(), OracleError> {
        let sentence = formula.is_sentence();
        let key = (TruthVector(vector), sentence);
        if self.seen.contains(&key) {
            return Ok(());
        }
        if self.reps.len() >= self.config.cap {
            return Err(OracleError::Cap {
                stratum: self.stratum,
                cap: self.config.cap,
            });
        }
        let size = formula.size();
        let vector = key.0.clone();
        self.seen.insert(key);
        if self.by_size.len() <= size {
            self.by_size.resize(size + 1, Vec::new());
        }
        self.by_size[size].push(self.reps.len());
        self.reps.push(Representative {
            formula,
            vector,
            size,
            stratum: self.stratum,
            sentence,
        });
        Ok(())
    }

    fn of_size(&self, s: usize, pred: impl Fn(&Representative) -> bool) -> Vec<usize> {
        self.by_size
            .get(s)
            .map(|v| v.iter().copied().filter(|&i| pred(&self.reps[i])).collect())
            .unwrap_or_default()
    }

    fn map(&self, v: &Bits, row: &[usize]) -> Bits {
        Bits::from_fn(v.len(), |c| v.get(row[c]))
    }

    fn atoms(&mut self) -> Result<(), OracleError> {
        let o = self.oracle;
        let sig = o.models[0].signature().clone();
        self.offer(HybridFormula::Bot, Bits::new(o.total))?;
        self.offer(HybridFormula::Top, Bits::full(o.total))?;
        for p in sig.props() {
            self.offer(HybridFormula::prop(p.clone()), o.vector(&HybridFormula::prop(p.clone()))?.0)?;
        }
        if o.uses_nominals() {
            for s in sig.noms() {
                self.offer(HybridFormula::nom(s.clone()), o.vector(&HybridFormula::nom(s.clone()))?.0)?;
            }
        }
        for j in 0..o.k {
            let x = HybridFormula::var(self.vars[j].clone());
            let v = o.vector(&x)?.0;
            self.offer(x, v)?;
        }
        Ok(())
    }

    /// Operators that keep the degree, applied to `operand`.
    fn same_degree(&mut self, operand: usize) -> Result<(), OracleError> {
        let o = self.oracle;
        let (phi, v) = (self.reps[operand].formula.clone(), self.reps[operand].vector.0.clone());
        self.offer(HybridFormula::not(phi.clone()), v.complement())?;
        if o.at_var() {
            for j in 0..o.k {
                let w = self.map(&v, &o.shift_var[j]);
                self.offer(HybridFormula::at_var(self.vars[j].clone(), phi.clone()), w)?;
            }
        }
        if o.at_nom() {
            let noms = o.models[0].signature().noms().to_vec();
            for (s, name) in noms.iter().enumerate() {
                let w = self.map(&v, &o.shift_nom[s]);
                self.offer(HybridFormula::at_nom(name.clone(), phi.clone()), w)?;
            }
        }
        Ok(())
    }

    /// Operators that raise the degree by one.
    fn raising(&mut self, operand: usize) -> Result<(), OracleError> {
        let o = self.oracle;
        let (phi, v) = (self.reps[operand].formula.clone(), self.reps[operand].vector.0.clone());
        let dia = Bits::from_fn(o.total, |c| o.succ[c].iter().any(|&d| v.get(d)));
        self.offer(HybridFormula::dia(phi.clone()), dia)?;
        let nec = Bits::from_fn(o.total, |c| o.succ[c].iter().all(|&d| v.get(d)));
        self.offer(HybridFormula::nec(phi.clone()), nec)?;
        if o.features.contains(Feature::Down) {
            for j in 0..o.k {
                let w = self.map(&v, &o.bind[j]);
                self.offer(HybridFormula::down(self.vars[j].clone(), phi.clone()), w)?;
            }
        }
        if o.features.contains(Feature::Exists) {
            for j in 0..o.k {
                let w = Bits::from_fn(o.total, |c| o.rebinds(c, j).any(|d| v.get(d)));
                self.offer(HybridFormula::exists(self.vars[j].clone(), phi.clone()), w)?;
            }
        }
        Ok(())
    }

    fn binary(&mut self, a: usize, b: usize) -> Result<(), OracleError> {
        let (fa, va) = (&self.reps[a].formula, &self.reps[a].vector.0);
        let (fb, vb) = (&self.reps[b].formula, &self.reps[b].vector.0);
        let or = (HybridFormula::or(fa.clone(), fb.clone()), va.or(vb));
        let and = (HybridFormula::and(fa.clone(), fb.clone()), va.and(vb));
        self.offer(or.0, or.1)?;
        self.offer(and.0, and.1)
    }

    fn run_stratum(&mut self, d: usize) -> Result<(), OracleError> {
        self.stratum = d;
        for s in 1..=self.config.max_size {
            if d == 0 && s == 1 {
                self.atoms()?;
                continue;
            }
            for i in self.of_size(s - 1, |r| r.stratum == d) {
                self.same_degree(i)?;
            }
            if d > 0 {
                for i in self.of_size(s - 1, |r| r.stratum == d - 1) {
                    self.raising(i)?;
                }
            }
            for sa in 1..s.saturating_sub(1) {
                let sb = s - 1 - sa;
                if sa > sb {
                    break;
                }
                let left = self.of_size(sa, |r| r.stratum <= d);
                let right = self.of_size(sb, |r| r.stratum <= d);
                for &a in &left {
                    for &b in &right {
                        if (sa == sb && a >= b) || (self.reps[a].stratum < d && self.reps[b].stratum < d) {
                            continue;
                        }
                        self.binary(a, b)?;
                    }
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn enumerate_oracle(oracle: &Oracle<'_>, l: usize, config: &OracleConfig) -> Result<Enumeration, OracleError> {
    let partition = oracle.partition(l);
    let mut b = Builder {
        oracle,
        config: *config,
        vars: slot_names(oracle.k),
        reps: Vec::new(),
        seen: HashSet::new(),
        by_size: Vec::new(),
        stratum: 0,
    };
    let mut starts = Vec::with_capacity(l + 1);
    for d in 0..=l {
        starts.push(b.reps.len());
        b.run_stratum(d)?;
    }
    Ok(Enumeration {
        k: oracle.k,
        classes: (0..=l).map(|d| partition.classes(d)).collect(),
        representatives: b.reps,
        starts,
    })
}
