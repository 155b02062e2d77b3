//! Line dumps of systems and morphisms.
//!
//! ```text
//! system F 2 depth=2
//! idx=0 index=1 subgroup=F 2 graph 1 a=1 b=1
//! bond 0 0
//! flag 1 2
//! source 0 F 2 graph 1 a=1 b=1
//! comp 0: a -> b
//! ```
//!
//! A morphism dump holds its source system block, then the target system
//! block when it differs, then one `source` line and the `comp` lines for
//! every target object.

use std::sync::Arc;

use super::{Component, SystemMorphism, TruncatedSystem};
use crate::error::{parse_err, Result};
use crate::group::{Element, GroupTag};
use crate::text::{commensuration_from_pairs, content_lines, parse_subgroup_inline};

pub fn format_system(s: &TruncatedSystem) -> String {
    let mut out = vec![format!("system {} depth={}", s.tag(), s.depth())];
    for (i, o) in s.objects().iter().enumerate() {
        out.push(format!(
            "idx={i} index={} subgroup={o}",
            o.index().expect("finite index")
        ));
    }
    out.extend(s.bonds().iter().map(|(i, j)| format!("bond {i} {j}")));
    out.extend(s.flagged().iter().map(|(i, j)| format!("flag {i} {j}")));
    out.join("\n")
}

pub fn format_morphism(m: &SystemMorphism) -> String {
    let mut out = vec![format_system(m.source())];
    if m.target() != m.source() {
        out.push(format_system(m.target()));
    }
    for c in m.components() {
        out.push(format!("source {} {}", c.target, c.source));
        for (b, i) in c.map.table() {
            out.push(format!("comp {}: {b} -> {i}", c.target));
        }
    }
    out.join("\n")
}

fn parse_system_block(lines: &[(usize, &str)]) -> Result<TruncatedSystem> {
    let (l0, head) = lines[0];
    let toks: Vec<&str> = head.split_whitespace().collect();
    let bad_head = || parse_err(l0, "expected `system <Z|F> <n> depth=<N>`");
    if toks.len() != 4 || toks[0] != "system" {
        return Err(bad_head());
    }
    let tag = GroupTag::parse(toks[1], toks[2]).map_err(|e| parse_err(l0, e.to_string()))?;
    let depth: usize = toks[3]
        .strip_prefix("depth=")
        .and_then(|d| d.parse().ok())
        .ok_or_else(bad_head)?;
    let mut objects = Vec::new();
    let mut bonds = Vec::new();
    let mut flags = Vec::new();
    for &(ln, t) in &lines[1..] {
        if let Some(rest) = t.strip_prefix("idx=") {
            let (i, rest) = rest.split_once(' ').ok_or_else(|| parse_err(ln, "bad object line"))?;
            let sub = rest
                .split_once("subgroup=")
                .ok_or_else(|| parse_err(ln, "missing subgroup="))?
                .1;
            if i.parse::<usize>().ok() != Some(objects.len()) {
                return Err(parse_err(ln, "object indices must be 0,1,2,.. in order"));
            }
            objects.push(parse_subgroup_inline(sub).map_err(|e| parse_err(ln, e.to_string()))?);
        } else if let Some(pair) = t.strip_prefix("bond ").or_else(|| t.strip_prefix("flag ")) {
            let nums: Vec<usize> = pair
                .split_whitespace()
                .map(|x| x.parse().map_err(|_| parse_err(ln, "bad index")))
                .collect::<Result<_>>()?;
            if nums.len() != 2 {
                return Err(parse_err(ln, "expected two indices"));
            }
            if t.starts_with("bond") {
                bonds.push((nums[0], nums[1]));
            } else {
                flags.push((nums[0], nums[1]));
            }
        } else {
            return Err(parse_err(ln, format!("unexpected line {t:?}")));
        }
    }
    let s = TruncatedSystem::from_objects(tag, depth, objects)?;
    if s.bonds() != bonds.as_slice() || s.flagged() != flags.as_slice() {
        return Err(parse_err(l0, "listed bonds do not match the objects"));
    }
    Ok(s)
}

fn split_blocks<'a>(lines: &'a [(usize, &'a str)]) -> Vec<&'a [(usize, &'a str)]> {
    let starts: Vec<usize> = lines
        .iter()
        .enumerate()
        .filter(|(_, (_, t))| t.starts_with("system ") || t.starts_with("source "))
        .map(|(i, _)| i)
        .collect();
    let mut out = Vec::new();
    for (n, &s) in starts.iter().enumerate() {
        let e = starts.get(n + 1).copied().unwrap_or(lines.len());
        out.push(&lines[s..e]);
    }
    out
}

pub fn parse_system(text: &str) -> Result<TruncatedSystem> {
    let lines = content_lines(text);
    if lines.is_empty() {
        return Err(parse_err(0, "empty system"));
    }
    parse_system_block(&lines)
}

pub fn parse_morphism(text: &str) -> Result<SystemMorphism> {
    let lines = content_lines(text);
    if lines.first().map_or(true, |(_, t)| !t.starts_with("system ")) {
        return Err(parse_err(lines.first().map_or(0, |l| l.0), "expected a system block"));
    }
    let blocks = split_blocks(&lines);
    let systems: Vec<_> = blocks.iter().take_while(|b| b[0].1.starts_with("system ")).collect();
    if systems.len() > 2 {
        return Err(parse_err(systems[2][0].0, "at most two system blocks"));
    }
    let source = Arc::new(parse_system_block(systems[0])?);
    let target = match systems.get(1) {
        Some(b) => Arc::new(parse_system_block(b)?),
        None => source.clone(),
    };
    let tag = source.tag();
    let mut components = Vec::new();
    for block in &blocks[systems.len()..] {
        let (ln, head) = block[0];
        let rest = head.strip_prefix("source ").expect("block start");
        let (mu, sub) = rest.split_once(' ').ok_or_else(|| parse_err(ln, "bad source line"))?;
        let mu: usize = mu.parse().map_err(|_| parse_err(ln, "bad object index"))?;
        if mu != components.len() {
            return Err(parse_err(ln, "components must be listed in object order"));
        }
        let src = parse_subgroup_inline(sub).map_err(|e| parse_err(ln, e.to_string()))?;
        let mut pre = Vec::new();
        let mut img = Vec::new();
        for &(cl, t) in &block[1..] {
            let body = t
                .strip_prefix(&format!("comp {mu}:"))
                .ok_or_else(|| parse_err(cl, format!("expected `comp {mu}: x -> y`")))?;
            let (a, b) = body.split_once("->").ok_or_else(|| parse_err(cl, "missing ->"))?;
            let parse = |x: &str| -> Result<Element> {
                tag.parse_element(x.trim()).map_err(|e| parse_err(cl, e.to_string()))
            };
            pre.push(parse(a)?);
            img.push(parse(b)?);
        }
        let map = commensuration_from_pairs(src.clone(), &pre, &img)
            .map_err(|e| parse_err(ln, e.to_string()))?;
        components.push(Component {
            target: mu,
            source_object: source.position(&src),
            source: src,
            map,
        });
    }
    SystemMorphism::new(source, target, components)
}

