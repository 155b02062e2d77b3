//! Line-oriented text formats for subgroups and commensurations.
//!
//! Blank lines and lines starting with `#` are ignored everywhere.

use crate::commensurations::{AbelianComm, Commensuration, FreeComm};
use crate::error::{parse_err, Error, Result};
use crate::freewords::{Alphabet, IntVector, Word};
use crate::group::{GroupTag, Subgroup};
use crate::lattices::Lattice;
use crate::matrix::RationalMatrix;
use crate::stallings::fold::fold_words;
use crate::stallings::SubgroupGraph;

/// Non-blank, non-comment lines with their 1-based line numbers.
pub fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn header(line: usize, text: &str) -> Result<(GroupTag, Vec<&str>)> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.len() < 2 {
        return Err(parse_err(line, format!("expected `Z <n>` or `F <k>`, found {text:?}")));
    }
    let tag = GroupTag::parse(toks[0], toks[1]).map_err(|e| parse_err(line, e.to_string()))?;
    Ok((tag, toks[2..].to_vec()))
}

fn parse_ints(line: usize, text: &str, n: usize) -> Result<Vec<i64>> {
    let v: Vec<i64> = text
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(line, format!("bad integer {t:?}"))))
        .collect::<Result<_>>()?;
    if v.len() != n {
        return Err(parse_err(line, format!("expected {n} entries, found {}", v.len())));
    }
    Ok(v)
}

/// Parses a subgroup block from already-filtered lines.
pub fn parse_subgroup_lines(lines: &[(usize, &str)]) -> Result<Subgroup> {
    let Some(&(l0, first)) = lines.first() else {
        return Err(parse_err(0, "empty subgroup block"));
    };
    let (tag, rest) = header(l0, first)?;
    match tag {
        GroupTag::Abelian(n) => {
            if !rest.is_empty() {
                return Err(parse_err(l0, "unexpected tokens after `Z <n>`"));
            }
            let gens = lines[1..]
                .iter()
                .map(|&(ln, t)| {
                    IntVector::parse(t, n).map_err(|e| parse_err(ln, e.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            if gens.len() != n {
                return Err(parse_err(l0, format!("expected {n} generator rows, found {}", gens.len())));
            }
            Ok(Subgroup::Lattice(Lattice::from_generators(n, &gens)?))
        }
        GroupTag::Free(k) => {
            let alphabet = Alphabet::new(k)?;
            match rest.as_slice() {
                [] => {
                    let words = lines[1..]
                        .iter()
                        .map(|&(ln, t)| alphabet.parse_word(t).map_err(|e| parse_err(ln, e.to_string())))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Subgroup::Graph(SubgroupGraph::from_generators(alphabet, &words)?))
                }
                ["graph", m] => {
                    let m: usize = m.parse().map_err(|_| parse_err(l0, format!("bad size {m:?}")))?;
                    if lines.len() != k + 1 {
                        return Err(parse_err(l0, format!("expected {k} permutation lines")));
                    }
                    let perms = lines[1..]
                        .iter()
                        .map(|&(ln, t)| {
                            parse_ints(ln, t, m)?
                                .into_iter()
                                .map(|x| {
                                    if x >= 1 && x as usize <= m {
                                        Ok(x as u32 - 1)
                                    } else {
                                        Err(parse_err(ln, format!("point {x} outside 1..{m}")))
                                    }
                                })
                                .collect::<Result<Vec<u32>>>()
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Subgroup::Graph(SubgroupGraph::from_permutations(k, &perms)?))
                }
                _ => Err(parse_err(l0, "expected `F <k>` or `F <k> graph <m>`")),
            }
        }
    }
}

pub fn parse_subgroup(text: &str) -> Result<Subgroup> {
    parse_subgroup_lines(&content_lines(text))
}

/// Canonical block form: HNF columns for lattices, permutation tables for graphs.
pub fn format_subgroup(s: &Subgroup) -> String {
    match s {
        Subgroup::Lattice(l) => {
            let mut out = format!("Z {}", l.dim());
            for c in l.columns() {
                let cells: Vec<String> = c.0.iter().map(|x| x.to_string()).collect();
                out.push('\n');
                out.push_str(&cells.join(" "));
            }
            out
        }
        Subgroup::Graph(g) => {
            let mut out = format!("F {} graph {}", g.rank(), g.vertex_count());
            for p in g.permutations().expect("finite-index subgroup") {
                let cells: Vec<String> = p.iter().map(|x| (x + 1).to_string()).collect();
                out.push('\n');
                out.push_str(&cells.join(" "));
            }
            out
        }
    }
}

/// Parses the one-line display form of a finite-index subgroup:
/// `Z <n> [(..),(..)]` or `F <k> graph <m> a=.. b=..`.
pub fn parse_subgroup_inline(text: &str) -> Result<Subgroup> {
    let text = text.trim();
    let (tag, rest) = header(0, text)?;
    match tag {
        GroupTag::Abelian(n) => {
            let body = text
                .find('[')
                .and_then(|i| text[i + 1..].strip_suffix(']'))
                .ok_or_else(|| parse_err(0, format!("expected `[cols]` in {text:?}")))?;
            let cols = body
                .split(')')
                .map(|c| c.trim_start_matches(',').trim().trim_start_matches('('))
                .filter(|c| !c.is_empty())
                .map(|c| IntVector::parse(c, n))
                .collect::<Result<Vec<_>>>()?;
            Ok(Subgroup::Lattice(Lattice::from_generators(n, &cols)?))
        }
        GroupTag::Free(k) => {
            let bad = || parse_err(0, format!("expected `F {k} graph <m> a=..` in {text:?}"));
            if rest.len() != k + 2 || rest[0] != "graph" {
                return Err(bad());
            }
            let m: usize = rest[1].parse().map_err(|_| bad())?;
            let perms = rest[2..]
                .iter()
                .map(|t| {
                    let (_, list) = t.split_once('=').ok_or_else(bad)?;
                    list.split(',')
                        .map(|x| match x.parse::<u32>() {
                            Ok(v) if v >= 1 && v as usize <= m => Ok(v - 1),
                            _ => Err(bad()),
                        })
                        .collect::<Result<Vec<u32>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Subgroup::Graph(SubgroupGraph::from_permutations(k, &perms)?))
        }
    }
}

pub fn parse_commensuration(text: &str) -> Result<Commensuration> {
    let lines = content_lines(text);
    let Some(&(l0, first)) = lines.first() else {
        return Err(parse_err(0, "empty commensuration"));
    };
    let toks: Vec<&str> = first.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "comm" {
        return Err(parse_err(l0, "expected `comm Z <n>` or `comm F <k>`"));
    }
    let tag = GroupTag::parse(toks[1], toks[2]).map_err(|e| parse_err(l0, e.to_string()))?;
    let body = &lines[1..];
    match tag {
        GroupTag::Abelian(n) => {
            if body.len() < n {
                return Err(parse_err(l0, format!("expected {n} matrix rows")));
            }
            let rows: Vec<&str> = body[..n].iter().map(|(_, t)| *t).collect();
            let first_row = body[0].0;
            let m = RationalMatrix::parse_rows(&rows, n, first_row)?;
            let rest = &body[n..];
            if rest.is_empty() {
                return Ok(Commensuration::from_matrix(m)?);
            }
            if rest[0].1 != "domain" {
                return Err(parse_err(rest[0].0, "expected `domain` or end of input"));
            }
            let hdr = format!("Z {n}");
            let mut block = vec![(rest[0].0, hdr.as_str())];
            block.extend_from_slice(&rest[1..]);
            let Subgroup::Lattice(dom) = parse_subgroup_lines(&block)? else {
                unreachable!("abelian header")
            };
            Ok(Commensuration::Abelian(AbelianComm::new(dom, m)?))
        }
        GroupTag::Free(k) => {
            let split = body
                .iter()
                .position(|(_, t)| t.contains("->"))
                .unwrap_or(body.len());
            let dom = parse_subgroup_lines(&body[..split])?;
            let Subgroup::Graph(dom) = dom else {
                return Err(parse_err(body.first().map_or(l0, |b| b.0), "domain must be a subgroup of F_k"));
            };
            if dom.rank() != k {
                return Err(Error::GroupMismatch(format!("comm F {k} with a domain in F {}", dom.rank())));
            }
            let alphabet = Alphabet::new(k)?;
            let mut pre = Vec::new();
            let mut img = Vec::new();
            for &(ln, t) in &body[split..] {
                let Some((a, b)) = t.split_once("->") else {
                    return Err(parse_err(ln, "expected `word -> imageword`"));
                };
                pre.push(alphabet.parse_word(a.trim()).map_err(|e| parse_err(ln, e.to_string()))?);
                img.push(alphabet.parse_word(b.trim()).map_err(|e| parse_err(ln, e.to_string()))?);
            }
            Ok(Commensuration::Free(free_from_pairs(dom, &pre, &img)?))
        }
    }
}

/// A commensuration of `domain` given by the images `img` of a free basis `pre`.
pub fn commensuration_from_pairs(
    domain: Subgroup,
    pre: &[crate::group::Element],
    img: &[crate::group::Element],
) -> Result<Commensuration> {
    use crate::group::Element;
    match domain {
        Subgroup::Graph(g) => {
            let words = |xs: &[Element]| -> Result<Vec<Word>> {
                xs.iter()
                    .map(|x| {
                        x.as_word()
                            .cloned()
                            .ok_or_else(|| Error::GroupMismatch(format!("{x} is not a word")))
                    })
                    .collect()
            };
            Ok(Commensuration::Free(free_from_pairs(g, &words(pre)?, &words(img)?)?))
        }
        Subgroup::Lattice(l) => {
            let n = l.dim();
            let vecs = |xs: &[Element]| -> Result<Vec<IntVector>> {
                xs.iter()
                    .map(|x| match x.as_vector() {
                        Some(v) if v.dim() == n => Ok(v.clone()),
                        _ => Err(Error::GroupMismatch(format!("{x} is not a vector of Z^{n}"))),
                    })
                    .collect()
            };
            let (pre, img) = (vecs(pre)?, vecs(img)?);
            if pre.len() != n || img.len() != n || Lattice::from_generators(n, &pre)? != l {
                return Err(Error::Precondition(
                    "the left-hand vectors are not a basis of the domain".into(),
                ));
            }
            let as_matrix = |cols: &[IntVector]| {
                RationalMatrix::new(
                    (0..n)
                        .map(|i| {
                            (0..n)
                                .map(|j| num_rational::BigRational::from(cols[j].0[i].clone()))
                                .collect()
                        })
                        .collect(),
                )
            };
            let m = &as_matrix(&img)? * &as_matrix(&pre)?.inverse()?;
            Ok(Commensuration::Abelian(AbelianComm::new(l, m)?))
        }
    }
}

/// A commensuration given on any free basis `pre` of `domain`.
fn free_from_pairs(domain: SubgroupGraph, pre: &[Word], img: &[Word]) -> Result<FreeComm> {
    if pre == domain.basis() {
        return FreeComm::new(domain, img.to_vec());
    }
    let folded = fold_words(domain.rank(), pre);
    if folded.graph != domain || !folded.kernel.is_empty() || pre.len() != domain.basis().len() {
        return Err(Error::Precondition(
            "the left-hand words are not a free basis of the domain".into(),
        ));
    }
    let images = domain
        .basis()
        .iter()
        .map(|b| {
            let mut v = 0;
            let mut e = Word::identity();
            for &l in b.letters() {
                e = e.mul(folded.tags[l.label()][v].as_ref().expect("complete"));
                v = folded.graph.target(v, l).expect("complete");
            }
            e.substitute(img)
        })
        .collect();
    FreeComm::new(domain, images)
}

pub fn format_commensuration(c: &Commensuration) -> String {
    match c {
        Commensuration::Abelian(a) => {
            let mut out = format!("comm Z {}\n{}", a.dim(), a.matrix());
            let canonical = AbelianComm::from_matrix(a.matrix().clone()).expect("nonsingular");
            if canonical.domain() != a.domain() {
                out.push_str("\ndomain");
                for col in a.domain().columns() {
                    let cells: Vec<String> = col.0.iter().map(|x| x.to_string()).collect();
                    out.push('\n');
                    out.push_str(&cells.join(" "));
                }
            }
            out
        }
        Commensuration::Free(f) => {
            let mut out = format!(
                "comm F {}\n{}",
                f.rank(),
                format_subgroup(&Subgroup::Graph(f.domain().clone()))
            );
            for (b, i) in f.domain().basis().iter().zip(f.images()) {
                out.push_str(&format!("\n{b} -> {i}"));
            }
            out
        }
    }
}
