use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use super::SubgroupGraph;
use crate::error::{Error, Result};
use crate::limits;

fn factorial(m: usize) -> u64 {
    (1..=m as u64).product()
}

fn for_each_tuple(rank: usize, m: usize, mut f: impl FnMut(&[Vec<u32>])) {
    let perms: Vec<Vec<u32>> = (0..m as u32).permutations(m).collect();
    let mut idx = vec![0usize; rank];
    loop {
        let tuple: Vec<Vec<u32>> = idx.iter().map(|&i| perms[i].clone()).collect();
        f(&tuple);
        let mut pos = 0;
        loop {
            if pos == rank {
                return;
            }
            idx[pos] += 1;
            if idx[pos] < perms.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn is_transitive(tuple: &[Vec<u32>], m: usize) -> bool {
    let mut seen = vec![false; m];
    seen[0] = true;
    let mut stack = vec![0usize];
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for p in tuple {
            let w = p[v] as usize;
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == m
}

fn check_budget(rank: usize, max_index: usize) -> Result<()> {
    let work: u64 = (1..=max_index)
        .map(|m| factorial(m).saturating_pow(rank as u32))
        .fold(0u64, |a, b| a.saturating_add(b));
    limits::check(work, || {
        format!("{work} permutation tuples for F_{rank} up to index {max_index}")
    })
}

/// All subgroups of F_k of index at most `max_index`, sorted by index then
/// canonical table. Realized by running over k-tuples of permutations of
/// `0..m`, keeping transitive ones and deduplicating by canonical relabeling.
pub fn enumerate_subgroups(rank: usize, max_index: usize) -> Result<Vec<SubgroupGraph>> {
    if rank == 0 || rank > 26 {
        return Err(Error::InvalidRank(rank));
    }
    check_budget(rank, max_index)?;
    let mut found = BTreeSet::new();
    for m in 1..=max_index {
        for_each_tuple(rank, m, |tuple| {
            if is_transitive(tuple, m) {
                let g = SubgroupGraph::from_permutations(rank, tuple)
                    .expect("transitive tuple gives a covering graph");
                found.insert(g);
            }
        });
    }
    Ok(found.into_iter().collect())
}

/// Number of transitive k-tuples of permutations of `0..m`.
pub fn count_transitive_tuples(rank: usize, m: usize) -> Result<u64> {
    check_budget(rank, m)?;
    let mut count = 0;
    for_each_tuple(rank, m, |t| {
        if is_transitive(t, m) {
            count += 1;
        }
    });
    Ok(count)
}

pub fn index_counts(subgroups: &[SubgroupGraph]) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for g in subgroups {
        *counts.entry(g.vertex_count()).or_insert(0) += 1;
    }
    counts
}

/// `(F_k)_{<= N}`: intersection of all subgroups of index at most `N`.
pub fn profinite_kernel(rank: usize, max_index: usize) -> Result<SubgroupGraph> {
    let all = enumerate_subgroups(rank, max_index)?;
    let mut k = SubgroupGraph::whole(rank);
    for g in &all {
        k = k.intersect(g).map_err(|e| match e {
            Error::ResourceCap(msg) => Error::ResourceCap(format!(
                "{msg}; partial kernel index reached {}",
                k.vertex_count()
            )),
            other => other,
        })?;
    }
    Ok(k)
}
