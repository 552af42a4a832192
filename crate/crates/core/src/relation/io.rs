//! Relation text format.
//!
//! ```text
//! # comment
//! D 2
//! level 0 r1 r2
//! level 1 a b:free
//! level 2 alpha beta
//! flag r1 a alpha
//! flag r2 b alpha
//! ```
//!
//! Group-built relations add `group split` or `group plain` followed by
//! one `action i f0 f1 ...` line per generator listing flag images.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{GroupAction, Level, PinCodeRelation};
use crate::error::{Error, Result};

pub fn write_relation(rel: &PinCodeRelation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "D {}", rel.d());
    for (r, level) in rel.levels().iter().enumerate() {
        let _ = write!(out, "level {r}");
        for (name, &free) in level.names.iter().zip(&level.free) {
            let _ = write!(out, " {name}{}", if free { ":free" } else { "" });
        }
        out.push('\n');
    }
    for f in 0..rel.num_flags() {
        out.push_str("flag");
        for (r, &p) in rel.flag(f).iter().enumerate() {
            let _ = write!(out, " {}", rel.levels()[r].names[p as usize]);
        }
        out.push('\n');
    }
    if let Some(g) = rel.group_action() {
        let _ = writeln!(out, "group {}", if g.split { "split" } else { "plain" });
        for (i, images) in g.generators.iter().enumerate() {
            let _ = write!(out, "action {i}");
            for f in images {
                let _ = write!(out, " {f}");
            }
            out.push('\n');
        }
    }
    out
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.contains(':') && !name.starts_with('#')
}

pub fn read_relation(text: &str) -> Result<PinCodeRelation> {
    let mut d: Option<usize> = None;
    let mut levels: Vec<Option<Level>> = Vec::new();
    let mut lookups: Vec<HashMap<String, usize>> = Vec::new();
    let mut flags = Vec::new();
    let mut split: Option<bool> = None;
    let mut actions: Vec<Option<Vec<u32>>> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let keyword = toks.next().unwrap_or_default();
        let need_d = || d.ok_or_else(|| Error::parse(line_no, "`D` must come first"));
        match keyword {
            "D" => {
                if d.is_some() {
                    return Err(Error::parse(line_no, "`D` given twice"));
                }
                let v: usize = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::parse(line_no, "expected `D <integer>`"))?;
                d = Some(v);
                levels = vec![None; v + 1];
                lookups = vec![HashMap::new(); v + 1];
            }
            "level" => {
                let dv = need_d()?;
                let r: usize = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::parse(line_no, "expected `level <rank> <pins...>`"))?;
                if r > dv {
                    return Err(Error::parse(line_no, format!("rank {r} exceeds D = {dv}")));
                }
                if levels[r].is_some() {
                    return Err(Error::parse(line_no, format!("level {r} given twice")));
                }
                let mut level = Level {
                    names: Vec::new(),
                    free: Vec::new(),
                };
                for tok in toks {
                    let (name, free) = match tok.split_once(':') {
                        Some((n, "free")) => (n, true),
                        Some((_, other)) => {
                            return Err(Error::parse(line_no, format!("unknown pin mark {other:?}")));
                        }
                        None => (tok, false),
                    };
                    if !valid_name(name) {
                        return Err(Error::parse(line_no, format!("invalid pin name {tok:?}")));
                    }
                    if lookups[r].insert(name.to_string(), level.names.len()).is_some() {
                        return Err(Error::parse(line_no, format!("pin {name:?} repeated in level {r}")));
                    }
                    level.names.push(name.to_string());
                    level.free.push(free);
                }
                levels[r] = Some(level);
            }
            "flag" => {
                let dv = need_d()?;
                let names: Vec<&str> = toks.collect();
                if names.len() != dv + 1 {
                    return Err(Error::parse(
                        line_no,
                        format!("flag lists {} pins, expected {}", names.len(), dv + 1),
                    ));
                }
                let mut flag = Vec::with_capacity(dv + 1);
                for (r, name) in names.iter().enumerate() {
                    if levels[r].is_none() {
                        return Err(Error::parse(line_no, format!("level {r} not declared before flags")));
                    }
                    let idx = lookups[r]
                        .get(*name)
                        .ok_or_else(|| Error::parse(line_no, format!("unknown pin {name:?} at rank {r}")))?;
                    flag.push(*idx);
                }
                flags.push(flag);
            }
            "group" => {
                split = Some(match toks.next() {
                    Some("split") => true,
                    Some("plain") => false,
                    _ => return Err(Error::parse(line_no, "expected `group split` or `group plain`")),
                });
                actions = vec![None; need_d()? + 1];
            }
            "action" => {
                if split.is_none() {
                    return Err(Error::parse(line_no, "`action` before `group`"));
                }
                let g: usize = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .filter(|&g| g < actions.len())
                    .ok_or_else(|| Error::parse(line_no, "expected a generator index"))?;
                let images = toks
                    .map(|t| t.parse::<u32>().map_err(|_| Error::parse(line_no, format!("bad flag index {t:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                actions[g] = Some(images);
            }
            other => return Err(Error::parse(line_no, format!("unknown keyword {other:?}"))),
        }
    }

    let d = d.ok_or_else(|| Error::parse(0, "missing `D` line"))?;
    let levels = levels
        .into_iter()
        .enumerate()
        .map(|(r, l)| l.ok_or_else(|| Error::parse(0, format!("level {r} missing"))))
        .collect::<Result<Vec<_>>>()?;
    debug_assert_eq!(levels.len(), d + 1);
    let rel = PinCodeRelation::new(levels, flags)?;
    match split {
        None => Ok(rel),
        Some(split) => {
            let generators = actions
                .into_iter()
                .enumerate()
                .map(|(i, a)| a.ok_or_else(|| Error::parse(0, format!("action {i} missing"))))
                .collect::<Result<Vec<_>>>()?;
            rel.with_group_action(GroupAction { generators, split })
        }
    }
}
