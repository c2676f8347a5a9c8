//! Line-oriented text formats: `.fhs` structures and `.fht` atomic types.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exquisite::AtomicType;
use crate::group::{Permutation, SymmetryGroup, DEFAULT_ORDER_LIMIT};
use crate::structure::FiniteStructure;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn tokens(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn parse_usize(line: usize, s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| parse_err(line, format!("expected a number, found {s:?}")))
}

enum GroupSpec {
    Id,
    Sym,
    Gens(Vec<Permutation>),
}

#[derive(Default)]
struct Block {
    name: Option<String>,
    arity: Option<usize>,
    group: Option<GroupSpec>,
    elements: Vec<String>,
    rels: Vec<(usize, Vec<String>)>,
    start: usize,
}

impl Block {
    fn finish(self, line: usize, order_limit: usize) -> Result<FiniteStructure> {
        let name = self.name.unwrap_or_default();
        let n = self
            .arity
            .ok_or_else(|| parse_err(self.start, "missing arity line"))?;
        let group = match self.group.unwrap_or(GroupSpec::Id) {
            GroupSpec::Id => SymmetryGroup::trivial(n),
            GroupSpec::Sym => SymmetryGroup::full(n),
            GroupSpec::Gens(g) => SymmetryGroup::from_generators_limited(n, &g, order_limit),
        }
        .map_err(|e| match e {
            Error::GroupClosure(_) => e,
            other => parse_err(line, other.to_string()),
        })?;
        let group = Arc::new(group);
        for (l, t) in &self.rels {
            if t.len() != n {
                return Err(parse_err(
                    *l,
                    format!("relation has {} entries, arity is {n}", t.len()),
                ));
            }
            for (i, e) in t.iter().enumerate() {
                if !self.elements.contains(e) {
                    return Err(parse_err(*l, format!("unknown element {e}")));
                }
                if t[..i].contains(e) {
                    return Err(parse_err(*l, format!("tuple repeats element {e}")));
                }
            }
        }
        let rels: Vec<Vec<String>> = self.rels.into_iter().map(|(_, t)| t).collect();
        FiniteStructure::from_named(&name, group, self.elements, rels)
    }
}

/// Parses every `structure … end` block in `text`.
pub fn parse_structures(text: &str) -> Result<Vec<FiniteStructure>> {
    parse_structures_limited(text, DEFAULT_ORDER_LIMIT)
}

pub fn parse_structures_limited(text: &str, order_limit: usize) -> Result<Vec<FiniteStructure>> {
    let mut out = Vec::new();
    let mut cur: Option<Block> = None;
    for (line, toks) in tokens(text) {
        let kw = toks[0];
        let args = &toks[1..];
        if kw == "structure" {
            if cur.is_some() {
                return Err(parse_err(line, "nested structure block"));
            }
            if args.len() > 1 {
                return Err(parse_err(line, "structure name must be one token"));
            }
            cur = Some(Block {
                name: args.first().map(|s| s.to_string()),
                start: line,
                ..Block::default()
            });
            continue;
        }
        let b = cur
            .as_mut()
            .ok_or_else(|| parse_err(line, format!("{kw} outside a structure block")))?;
        match kw {
            "arity" => {
                if args.len() != 1 || b.arity.is_some() {
                    return Err(parse_err(line, "arity takes one number, once"));
                }
                b.arity = Some(parse_usize(line, args[0])?);
            }
            "group" => {
                let n = b
                    .arity
                    .ok_or_else(|| parse_err(line, "group before arity"))?;
                let spec = match args {
                    ["id"] => GroupSpec::Id,
                    ["sym"] => GroupSpec::Sym,
                    ["gen", rest @ ..] => {
                        let images = rest
                            .iter()
                            .map(|s| parse_usize(line, s))
                            .collect::<Result<Vec<_>>>()?;
                        if images.len() != n {
                            return Err(parse_err(
                                line,
                                format!("generator has {} images, arity is {n}", images.len()),
                            ));
                        }
                        let p = Permutation::from_one_based(&images)
                            .map_err(|e| parse_err(line, e.to_string()))?;
                        match &mut b.group {
                            Some(GroupSpec::Gens(g)) => {
                                g.push(p);
                                continue;
                            }
                            None => GroupSpec::Gens(vec![p]),
                            Some(_) => return Err(parse_err(line, "conflicting group lines")),
                        }
                    }
                    _ => {
                        return Err(parse_err(
                            line,
                            "expected group id, group sym or group gen …",
                        ))
                    }
                };
                if b.group.is_some() {
                    return Err(parse_err(line, "conflicting group lines"));
                }
                b.group = Some(spec);
            }
            "elements" => b.elements.extend(args.iter().map(|s| s.to_string())),
            "rel" => b
                .rels
                .push((line, args.iter().map(|s| s.to_string()).collect())),
            "end" => {
                if !args.is_empty() {
                    return Err(parse_err(line, "unexpected tokens after end"));
                }
                out.push(cur.take().expect("open block").finish(line, order_limit)?);
            }
            other => return Err(parse_err(line, format!("unknown keyword {other:?}"))),
        }
    }
    if let Some(b) = cur {
        return Err(parse_err(b.start, "structure block is not closed with end"));
    }
    Ok(out)
}

/// Parses a text holding exactly one structure block.
pub fn parse_structure(text: &str) -> Result<FiniteStructure> {
    let mut all = parse_structures(text)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        0 => Err(parse_err(1, "no structure block")),
        k => Err(parse_err(
            1,
            format!("expected one structure block, found {k}"),
        )),
    }
}

const PER_LINE: usize = 16;

pub fn serialize_structure(m: &FiniteStructure) -> String {
    let mut s = String::new();
    if m.name().is_empty() {
        s.push_str("structure\n");
    } else {
        writeln!(s, "structure {}", m.name()).unwrap();
    }
    let g = m.group();
    writeln!(s, "arity {}", g.arity()).unwrap();
    if g.is_trivial() {
        s.push_str("group id\n");
    } else if g.is_full() {
        s.push_str("group sym\n");
    } else {
        for p in g.generators() {
            let imgs: Vec<String> = p.one_based().iter().map(|i| i.to_string()).collect();
            writeln!(s, "group gen {}", imgs.join(" ")).unwrap();
        }
    }
    for chunk in m.names().chunks(PER_LINE) {
        writeln!(s, "elements {}", chunk.join(" ")).unwrap();
    }
    for r in m.named_relations() {
        writeln!(s, "rel {}", r.join(" ")).unwrap();
    }
    s.push_str("end\n");
    s
}

pub fn parse_type(text: &str) -> Result<AtomicType> {
    let mut name = None;
    let mut arity = None;
    let mut tail = None;
    let mut rels = Vec::new();
    let mut open = false;
    let mut done = false;
    for (line, toks) in tokens(text) {
        if done {
            return Err(parse_err(line, "content after end"));
        }
        match (toks[0], &toks[1..]) {
            ("type", rest) if !open => {
                open = true;
                name = rest.first().map(|s| s.to_string());
            }
            (_, _) if !open => return Err(parse_err(line, "expected type line")),
            ("arity", [v]) => arity = Some(parse_usize(line, v)?),
            ("tail", [v]) => tail = Some(parse_usize(line, v)?),
            ("rel", idx) => {
                let t = idx
                    .iter()
                    .map(|s| parse_usize(line, s))
                    .collect::<Result<Vec<_>>>()?;
                rels.push((line, t));
            }
            ("end", []) => done = true,
            (kw, _) => return Err(parse_err(line, format!("unexpected line starting {kw:?}"))),
        }
    }
    if !done {
        return Err(parse_err(1, "type block is not closed with end"));
    }
    let n = arity.ok_or_else(|| parse_err(1, "missing arity"))?;
    let l = tail.ok_or_else(|| parse_err(1, "missing tail"))?;
    for (line, t) in &rels {
        if t.len() != n {
            return Err(parse_err(
                *line,
                format!("relation has {} entries, arity is {n}", t.len()),
            ));
        }
        if let Some(bad) = t.iter().find(|&&i| i >= n + l) {
            return Err(parse_err(*line, format!("index {bad} out of range")));
        }
    }
    let rels: Vec<Vec<usize>> = rels.into_iter().map(|(_, t)| t).collect();
    AtomicType::new(name.as_deref().unwrap_or("q"), n, l, &rels)
        .map_err(|e| parse_err(1, e.to_string()))
}

pub fn serialize_type(q: &AtomicType) -> String {
    let mut s = String::new();
    writeln!(s, "type {}", q.name()).unwrap();
    writeln!(s, "arity {}", q.arity()).unwrap();
    writeln!(s, "tail {}", q.tail_len()).unwrap();
    for r in q.relations() {
        let idx: Vec<String> = r.iter().map(|i| i.to_string()).collect();
        writeln!(s, "rel {}", idx.join(" ")).unwrap();
    }
    s.push_str("end\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# a comment
structure m
arity 3
group gen 2 1 3
elements z y x
elements w
rel y x z   # any orbit member
rel w z x
end
";

    #[test]
    fn parse_and_normalize() {
        let m = parse_structure(SAMPLE).unwrap();
        assert_eq!(m.group().order(), 2);
        assert_eq!(m.names(), &["w", "x", "y", "z"]);
        let text = serialize_structure(&m);
        assert_eq!(
            text,
            "structure m\narity 3\ngroup gen 2 1 3\nelements w x y z\nrel w z x\nrel x y z\nend\n"
        );
        assert_eq!(serialize_structure(&parse_structure(&text).unwrap()), text);
    }

    #[test]
    fn sym_group_has_six_members() {
        let m =
            parse_structure("structure s\narity 3\ngroup sym\nelements a b c\nrel c b a\nend\n")
                .unwrap();
        assert_eq!(m.group().order(), 6);
        assert_eq!(m.named_relations(), vec![vec!["a", "b", "c"]]);
    }

    #[test]
    fn errors_carry_lines() {
        let bad = "structure s\narity 3\ngroup sym\nelements a b c\nrel a b d\nend\n";
        assert_eq!(
            parse_structure(bad).unwrap_err(),
            parse_err(5, "unknown element d")
        );
        assert!(matches!(
            parse_structure("structure s\narity 3\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_structure("rel a b c\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        let big = "structure s\narity 4\ngroup gen 2 3 4 1\ngroup gen 2 1 3 4\nend\n";
        assert_eq!(
            parse_structures_limited(big, 5).unwrap_err(),
            Error::GroupClosure(5)
        );
    }

    #[test]
    fn type_round_trip() {
        let text = "type q\narity 3\ntail 3\nrel 0 3 4\nrel 1 4 5\nend\n";
        let q = parse_type(text).unwrap();
        assert_eq!(serialize_type(&q), text);
        assert!(parse_type("type q\narity 3\ntail 1\nrel 0 1 9\nend\n").is_err());
    }
}
