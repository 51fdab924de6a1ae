//! Oracle-equivalence checks shared by the integration tests and the
//! acceptance runner. Each returns a one-line summary or the first failure.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use teamseq_core::miner::{canonical_form, is_equivalent, mine, BackgroundKnowledge, MiningConfig};
use teamseq_core::scoring::{fisher_score, ClassStats};
use teamseq_core::{apply_substitution, theta_subsumes, ClassLabel, Pattern};

use super::oracle;

pub const REFERENCE_PATTERNS: &str = include_str!("../fixtures/reference_patterns.tsv");

pub fn subsumption_vs_enumeration(instances: usize, seed: u64) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0;
    for i in 0..instances {
        let (g, s) = oracle::random_instance(&mut rng, 4, 8);
        let fast = theta_subsumes(&g, &s);
        let slow = oracle::brute_subsumes(&g, &s);
        if fast.is_some() != slow {
            return Err(format!(
                "instance {i}: library says {}, enumeration says {slow} for {} into {}",
                fast.is_some(),
                Pattern::new(g),
                Pattern::new(s)
            ));
        }
        if let Some(theta) = fast {
            hits += 1;
            let image = apply_substitution(&g, &theta);
            if image.iter().any(|a| !s.contains(a)) {
                return Err(format!("instance {i}: witness maps outside the target"));
            }
        }
    }
    Ok(format!("{instances} instances agree ({hits} subsumed)"))
}

pub struct MinerReport {
    pub runs: usize,
    pub patterns: usize,
    pub checked_generalizations: usize,
    pub antimonotone_violations: usize,
}

/// Mines random corpora at every α ∈ {0.2, 0.5, 1.0} and maxsize ∈ {1,2,3}
/// and compares with the generate-from-occurrences oracle, up to
/// θ-equivalence. Also records every one-atom-removed connected
/// generalization of each mined pattern whose support is smaller.
pub fn miner_vs_enumeration(corpora: usize, seed: u64) -> Result<MinerReport, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bk = BackgroundKnowledge::soccer();
    let mut report = MinerReport {
        runs: 0,
        patterns: 0,
        checked_generalizations: 0,
        antimonotone_violations: 0,
    };
    for c in 0..corpora {
        let n = rng.gen_range(3..=15);
        let corpus = oracle::random_corpus(&mut rng, n, 12);
        let occurring = oracle::with_support(oracle::occurring_patterns(&corpus, &bk, 3), &corpus);
        for maxsize in 1..=3 {
            let sized: std::collections::HashMap<_, _> = occurring
                .iter()
                .filter(|(_, (p, _))| p.len() <= maxsize)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            for alpha in [0.2, 0.5, 1.0] {
                report.runs += 1;
                let cfg = MiningConfig::new(alpha, maxsize, bk.clone());
                let found = mine(&corpus, &cfg).map_err(|e| format!("corpus {c}: {e}"))?;
                let expected = oracle::frequent_classes(&sized, oracle::threshold(alpha, n));
                let mut got = BTreeMap::new();
                for fp in &found {
                    let key = oracle::class_key(&fp.pattern.atoms);
                    if got.insert(key, fp.support_total).is_some() {
                        return Err(format!(
                            "corpus {c}, α={alpha}, maxsize={maxsize}: two mined patterns equivalent to {}",
                            fp.pattern
                        ));
                    }
                    let direct = oracle::brute_support(&fp.pattern.atoms, &corpus);
                    if direct != fp.support_total {
                        return Err(format!(
                            "corpus {c}: {} reported support {} but occurs in {direct}",
                            fp.pattern, fp.support_total
                        ));
                    }
                    if fp.pattern.len() >= 2 {
                        for i in 0..fp.pattern.len() {
                            let mut rest = fp.pattern.atoms.clone();
                            rest.remove(i);
                            if !Pattern::new(rest.clone()).is_connected() {
                                continue;
                            }
                            report.checked_generalizations += 1;
                            if oracle::brute_support(&rest, &corpus) < direct {
                                report.antimonotone_violations += 1;
                            }
                        }
                    }
                }
                report.patterns += found.len();
                if got != expected {
                    let missing: Vec<_> =
                        expected.keys().filter(|k| !got.contains_key(*k)).collect();
                    let extra: Vec<_> = got.keys().filter(|k| !expected.contains_key(*k)).collect();
                    return Err(format!(
                        "corpus {c}, α={alpha}, maxsize={maxsize}: {} mined vs {} expected; \
                         missing {missing:?}, unexpected {extra:?}",
                        got.len(),
                        expected.len()
                    ));
                }
            }
        }
    }
    Ok(report)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn random_values(rng: &mut ChaCha8Rng) -> BTreeMap<ClassLabel, Vec<f64>> {
    let mut values = BTreeMap::new();
    for c in ClassLabel::ALL {
        let n = rng.gen_range(1..=30);
        let spread = rng.gen_range(0..=6);
        let base = rng.gen_range(0..=3);
        let xs: Vec<f64> = (0..n)
            .map(|_| (base + rng.gen_range(0..=spread)) as f64)
            .collect();
        values.insert(c, xs);
    }
    values
}

pub fn fisher_properties(samples: usize, seed: u64) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut infinite = 0;
    for i in 0..samples {
        let values = random_values(&mut rng);
        let lib = fisher_score(&ClassStats::from_values(&values));
        let direct = oracle::direct_fisher(&values);
        if !close(lib, direct, 1e-9) {
            return Err(format!(
                "sample {i}: {lib} vs direct {direct} for {values:?}"
            ));
        }
        if lib < 0.0 {
            return Err(format!("sample {i}: negative score {lib}"));
        }
        infinite += lib.is_infinite() as usize;

        let k = rng.gen_range(0.01..100.0);
        let scaled: BTreeMap<_, _> = values
            .iter()
            .map(|(c, xs)| (*c, xs.iter().map(|x| x * k).collect::<Vec<_>>()))
            .collect();
        let s = fisher_score(&ClassStats::from_values(&scaled));
        if !close(lib, s, 1e-9) {
            return Err(format!("sample {i}: scaling by {k} moved {lib} to {s}"));
        }

        let swapped: BTreeMap<_, _> = values
            .iter()
            .map(|(c, xs)| {
                let other = if *c == ClassLabel::Cbr {
                    ClassLabel::Rea
                } else {
                    ClassLabel::Cbr
                };
                (other, xs.clone())
            })
            .collect();
        let w = fisher_score(&ClassStats::from_values(&swapped));
        if !close(lib, w, 1e-9) {
            return Err(format!("sample {i}: class swap moved {lib} to {w}"));
        }

        // equal means: shift one class onto the other's mean
        let mut equal = values.clone();
        let target = {
            let xs = &equal[&ClassLabel::Cbr];
            xs.iter().sum::<f64>() / xs.len() as f64
        };
        let xs = equal.get_mut(&ClassLabel::Rea).unwrap();
        let mu = xs.iter().sum::<f64>() / xs.len() as f64;
        for x in xs.iter_mut() {
            *x += target - mu;
        }
        let e = fisher_score(&ClassStats::from_values(&equal));
        if e != 0.0 {
            return Err(format!("sample {i}: equal means scored {e}"));
        }
    }
    Ok(format!("{samples} samples agree ({infinite} infinite)"))
}

pub fn reference_patterns() -> Vec<(String, String, String)> {
    REFERENCE_PATTERNS
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let mut it = l.split('\t');
            let p = it.next().unwrap().to_string();
            let s = it.next().unwrap_or("").to_string();
            let c = it.next().unwrap_or("").to_string();
            (p, s, c)
        })
        .collect()
}

/// parse → canonical key → parse → print → parse, ending θ-equivalent to the
/// start by both the library and the enumeration oracle.
pub fn format_round_trip() -> Result<String, String> {
    let rows = reference_patterns();
    let mut relations = HashSet::new();
    for (text, _, _) in &rows {
        let p = Pattern::parse(text).map_err(|e| format!("{text}: {e}"))?;
        let key = canonical_form(&p);
        let q = Pattern::parse(&key).map_err(|e| format!("canonical key {key}: {e}"))?;
        let printed = q.to_string();
        let r = Pattern::parse(&printed).map_err(|e| format!("{printed}: {e}"))?;
        if !is_equivalent(&p, &r) {
            return Err(format!("{text} and {printed} are not equivalent"));
        }
        let skolem_p = p.skolemize();
        let skolem_r = r.skolemize();
        if !(oracle::brute_subsumes(&p.atoms, &skolem_r)
            && oracle::brute_subsumes(&r.atoms, &skolem_p))
        {
            return Err(format!(
                "oracle rejects equivalence of {text} and {printed}"
            ));
        }
        if canonical_form(&r) != key {
            return Err(format!("canonical key of {printed} drifted"));
        }
        for a in &p.atoms {
            for t in a.args.iter().skip(2) {
                relations.insert(t.name().to_string());
            }
        }
    }
    for v in ["up", "down"] {
        if !relations.contains(v) {
            return Err(format!("no reference pattern uses '{v}'"));
        }
    }
    Ok(format!("{} patterns round-trip", rows.len()))
}
