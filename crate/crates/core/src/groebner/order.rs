//! Monomial orders on exponent vectors with nonnegative entries.

use std::cmp::Ordering;

/// Orders used by the Groebner engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonOrder {
    /// Graded reverse lexicographic.
    DegRevLex,
    /// Eliminate the variable at this index: any monomial containing it beats
    /// any monomial that does not; ties broken by degrevlex on the rest.
    Elim(usize),
}

pub fn cmp_exps(a: &[i64], b: &[i64], ord: MonOrder) -> Ordering {
    match ord {
        MonOrder::DegRevLex => degrevlex(a, b),
        MonOrder::Elim(k) => match a[k].cmp(&b[k]) {
            Ordering::Equal => {
                let ra: Vec<i64> = strip(a, k);
                let rb: Vec<i64> = strip(b, k);
                degrevlex(&ra, &rb)
            }
            other => other,
        },
    }
}

fn strip(e: &[i64], k: usize) -> Vec<i64> {
    e.iter()
        .enumerate()
        .filter(|(i, _)| *i != k)
        .map(|(_, &v)| v)
        .collect()
}

fn degrevlex(a: &[i64], b: &[i64]) -> Ordering {
    let da: i64 = a.iter().sum();
    let db: i64 = b.iter().sum();
    match da.cmp(&db) {
        Ordering::Equal => {
            for i in (0..a.len()).rev() {
                match a[i].cmp(&b[i]) {
                    Ordering::Equal => continue,
                    // Smaller exponent in the last differing slot wins.
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                }
            }
            Ordering::Equal
        }
        other => other,
    }
}

/// Componentwise divisibility of monomials.
pub fn divides(d: &[i64], m: &[i64]) -> bool {
    d.iter().zip(m.iter()).all(|(a, b)| a <= b)
}

pub fn lcm_exps(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b.iter()).map(|(x, y)| *x.max(y)).collect()
}
