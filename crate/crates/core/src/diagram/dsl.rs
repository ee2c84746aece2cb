//! Text format for group diagrams. See `docs/diagram-dsl.md`.
//!
//! ```text
//! G = S3 x S1
//! H = trivial; Kminus = circle[(i,1):(1,0)]; Kplus = circle[(j,1):(d,1)]
//! d = 2; n = 5
//! ```

use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::{DiagramError, GroupDiagram, SubgroupDesc};
use crate::group::{FactorKind, GroupElem, GroupSpec};
use crate::quat::{exp_dir, ImUnit, Quat};

#[derive(Clone, Debug)]
pub struct ParsedDiagram {
    pub diagram: GroupDiagram,
    pub params: BTreeMap<String, i64>,
    /// Normalizations applied while building (gcd reduction of slopes).
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(char),
}

fn err(line: usize, msg: impl Into<String>) -> DiagramError {
    DiagramError::Parse { line, msg: msg.into() }
}

fn lex(line: usize, s: &str) -> Result<Vec<Tok>, DiagramError> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = cs[st..i].iter().collect();
            let v = text.parse().map_err(|_| err(line, format!("integer {text} out of range")))?;
            out.push(Tok::Int(v));
        } else if "()[],:*/=-".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(err(line, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [Tok],
    pos: usize,
    line: usize,
    params: &'a BTreeMap<String, i64>,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<Tok, DiagramError> {
        let t = self.toks.get(self.pos).cloned().ok_or_else(|| err(self.line, "unexpected end of statement"))?;
        self.pos += 1;
        Ok(t)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), DiagramError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(err(self.line, format!("expected '{c}', found {:?}", self.peek())))
        }
    }

    fn done(&self) -> Result<(), DiagramError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(err(self.line, format!("trailing input at {t:?}"))),
        }
    }

    /// `[-](INT | ident)`
    fn int(&mut self) -> Result<i64, DiagramError> {
        let neg = self.eat('-');
        let v = match self.next()? {
            Tok::Int(v) => v,
            Tok::Ident(name) => {
                *self.params.get(&name).ok_or_else(|| err(self.line, format!("unknown parameter {name}")))?
            }
            t => return Err(err(self.line, format!("expected integer, found {t:?}"))),
        };
        Ok(if neg { -v } else { v })
    }

    fn tuple<T>(
        &mut self,
        mut item: impl FnMut(&mut Self, usize) -> Result<T, DiagramError>,
    ) -> Result<Vec<T>, DiagramError> {
        self.expect('(')?;
        let mut out = vec![item(self, 0)?];
        while self.eat(',') {
            out.push(item(self, out.len())?);
        }
        self.expect(')')?;
        Ok(out)
    }

    /// `[-](1|i|j|k)` or `[-]exp(DIR * INT[/INT] pi)`
    fn unit(&mut self) -> Result<Quat, DiagramError> {
        let neg = self.eat('-');
        let q = match self.next()? {
            Tok::Int(1) => Quat::ONE,
            Tok::Ident(s) if s == "i" => Quat::I,
            Tok::Ident(s) if s == "j" => Quat::J,
            Tok::Ident(s) if s == "k" => Quat::K,
            Tok::Ident(s) if s == "exp" => {
                self.expect('(')?;
                let dir = self.direction()?;
                self.expect('*')?;
                let num = self.int()?;
                let den = if self.eat('/') { self.int()? } else { 1 };
                if den == 0 {
                    return Err(err(self.line, "zero denominator"));
                }
                match self.next()? {
                    Tok::Ident(p) if p == "pi" => {}
                    t => return Err(err(self.line, format!("expected pi, found {t:?}"))),
                }
                self.expect(')')?;
                exp_dir(dir, PI * num as f64 / den as f64)
            }
            t => return Err(err(self.line, format!("expected a unit, found {t:?}"))),
        };
        Ok(if neg { -q } else { q })
    }

    fn direction(&mut self) -> Result<ImUnit, DiagramError> {
        let q = self.unit()?;
        ImUnit::new(q).ok_or_else(|| err(self.line, "expected an imaginary unit direction"))
    }

    fn group(&mut self, g: &GroupSpec, notes: &mut Vec<String>) -> Result<SubgroupDesc, DiagramError> {
        let mut parts = vec![self.factor(g, notes)?];
        while self.eat('*') {
            parts.push(self.factor(g, notes)?);
        }
        if parts.len() == 1 {
            Ok(parts.pop().expect("one part"))
        } else {
            SubgroupDesc::product(&parts)
        }
    }

    fn factor(&mut self, g: &GroupSpec, notes: &mut Vec<String>) -> Result<SubgroupDesc, DiagramError> {
        let line = self.line;
        let name = match self.next()? {
            Tok::Ident(s) => s,
            t => return Err(err(line, format!("expected a subgroup, found {t:?}"))),
        };
        match name.as_str() {
            "trivial" => Ok(SubgroupDesc::trivial(g)),
            "block" => {
                self.expect('[')?;
                let f = self.int()?;
                self.expect(']')?;
                if f < 1 || f as usize > g.len() {
                    return Err(err(line, format!("block index {f} outside 1..={}", g.len())));
                }
                SubgroupDesc::block(g, f as usize - 1)
            }
            "cyclic" => {
                self.expect('[')?;
                let mut gens = vec![self.elem(g)?];
                while self.eat(',') {
                    gens.push(self.elem(g)?);
                }
                self.expect(']')?;
                SubgroupDesc::finite(g, &gens)
            }
            "circle" => {
                self.expect('[')?;
                let kinds = g.factors().to_vec();
                let dirs = self.tuple(|c, f| match kinds.get(f) {
                    Some(FactorKind::S3) => c.direction().map(Some),
                    _ => c.unit().map(|_| None),
                })?;
                self.expect(':')?;
                let slopes = self.tuple(|c, _| c.int())?;
                self.expect(']')?;
                let (k, changed) = SubgroupDesc::circle(g, &dirs, &slopes).map_err(|e| err(line, e.to_string()))?;
                if changed {
                    notes.push(format!("line {line}: circle slopes {slopes:?} divided by their gcd"));
                }
                Ok(k)
            }
            other => Err(err(line, format!("unknown subgroup kind {other}"))),
        }
    }

    fn elem(&mut self, g: &GroupSpec) -> Result<GroupElem, DiagramError> {
        let line = self.line;
        let qs = self.tuple(|c, _| c.unit())?;
        GroupElem::from_quats(g, &qs).map_err(|e| err(line, e.to_string()))
    }
}

fn parse_group_spec(line: usize, toks: &[Tok]) -> Result<GroupSpec, DiagramError> {
    let mut kinds = Vec::new();
    for (idx, t) in toks.iter().enumerate() {
        let want_factor = idx % 2 == 0;
        match (want_factor, t) {
            (true, Tok::Ident(s)) if s == "S3" => kinds.push(FactorKind::S3),
            (true, Tok::Ident(s)) if s == "S1" => kinds.push(FactorKind::S1),
            (false, Tok::Ident(s)) if s == "x" => {}
            (false, Tok::Sym('*')) => {}
            _ => return Err(err(line, format!("bad group factor list at {t:?}"))),
        }
    }
    if toks.len().is_multiple_of(2) {
        return Err(err(line, "group factor list ends with a separator"));
    }
    GroupSpec::new(kinds).map_err(|e| err(line, e.to_string()))
}

/// Parses a diagram. Statements are separated by `;` or newlines, `#` starts a
/// comment, and integer parameters may be used before their definition.
pub fn parse_diagram(text: &str) -> Result<ParsedDiagram, DiagramError> {
    let mut stmts: Vec<(usize, String, Vec<Tok>)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("");
        for stmt in body.split(';') {
            let toks = lex(line, stmt)?;
            if toks.is_empty() {
                continue;
            }
            let (name, rest) = match (&toks[0], toks.get(1)) {
                (Tok::Ident(name), Some(Tok::Sym('='))) => (name.clone(), toks[2..].to_vec()),
                _ => return Err(err(line, "expected 'name = value'")),
            };
            if rest.is_empty() {
                return Err(err(line, format!("empty value for {name}")));
            }
            if stmts.iter().any(|(_, n, _)| *n == name) {
                return Err(err(line, format!("{name} assigned twice")));
            }
            stmts.push((line, name, rest));
        }
    }

    let mut params = BTreeMap::new();
    for (line, name, toks) in &stmts {
        if ["G", "H", "Kminus", "Kplus"].contains(&name.as_str()) {
            continue;
        }
        let empty = BTreeMap::new();
        let mut c = Cursor { toks, pos: 0, line: *line, params: &empty };
        let v = c.int()?;
        c.done()?;
        params.insert(name.clone(), v);
    }

    let find = |key: &str| stmts.iter().find(|(_, n, _)| n == key).ok_or_else(|| err(0, format!("missing {key}")));
    let (gl, _, gt) = find("G")?;
    let g = parse_group_spec(*gl, gt)?;
    let mut notes = Vec::new();
    let mut groups = Vec::new();
    for key in ["H", "Kminus", "Kplus"] {
        let (line, _, toks) = find(key)?;
        let mut c = Cursor { toks, pos: 0, line: *line, params: &params };
        let k = c.group(&g, &mut notes)?;
        c.done()?;
        groups.push(k);
    }
    let n =
        params.remove("n").map(|v| usize::try_from(v).map_err(|_| err(0, format!("n must be non-negative, got {v}"))));
    let n = n.transpose()?;
    let kp = groups.pop().expect("three groups");
    let km = groups.pop().expect("three groups");
    let h = groups.pop().expect("three groups");
    let diagram = GroupDiagram::new(h, km, kp, n)?;
    Ok(ParsedDiagram { diagram, params, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{family_obstruction, Family, FamilyParams, Shape};

    #[test]
    fn parses_the_md5_example() {
        let text = "G = S3 x S1; H = trivial; Kminus = circle[(i,1):(1,0)]; Kplus = circle[(j,1):(d,1)] ; n = 5\nd = 2";
        let p = parse_diagram(text).unwrap();
        assert_eq!(p.diagram.n(), 5);
        assert_eq!(p.params.get("d"), Some(&2));
        let (std, _) = Family::MD5 { d: 2 }.build().unwrap();
        assert!(p.diagram.k_plus().same_as(std.k_plus()));
        assert!(p.diagram.k_minus().same_as(std.k_minus()));
    }

    #[test]
    fn parses_products_exp_and_comments() {
        let text = "# P_A7 with (1,1,1,1)\n\
                    G = S3 x S3\n\
                    H = cyclic[(i,i)]\n\
                    Kminus = circle[(i,i):(1,1)]\n\
                    Kplus = circle[(j,j):(1,1)] * cyclic[(i,i)]   # the Weyl element lives here\n\
                    n = 7\n";
        let p = parse_diagram(text).unwrap();
        let (std, _) = Family::PA7 { p_minus: 1, q_minus: 1, p_plus: 1, q_plus: 1 }.build().unwrap();
        assert!(p.diagram.k_plus().same_as(std.k_plus()));
        assert!(p.diagram.h().same_as(std.h()));

        let q =
            parse_diagram("G = S3; H = cyclic[(exp(i*1/2 pi))]; Kminus = circle[(i):(1)]; Kplus = circle[(-i):(1)]")
                .unwrap();
        assert_eq!(q.diagram.h().components(), 4);
        assert_eq!(q.diagram.h().shape(), Shape::FiniteCyclic);
    }

    #[test]
    fn reports_line_numbers() {
        let e = parse_diagram("G = S3 x S1\nH = trivial\nKminus = circle[(q,1):(1,0)]").unwrap_err();
        assert!(matches!(e, DiagramError::Parse { line: 3, .. }), "{e}");
        assert!(parse_diagram("G = S3 x S1; H = trivial; Kminus = trivial; Kplus = trivial; n = 9").is_err());
        assert!(parse_diagram("G = S3\nG = S3").is_err());
        assert!(parse_diagram("G = S3; H = block[2]; Kminus = trivial; Kplus = trivial").is_err());
    }

    #[test]
    fn parsed_and_built_diagrams_agree_on_d() {
        let text = "G = S3 x S3; H = trivial; Kminus = block[1]; Kplus = block[1]";
        let p = parse_diagram(text).unwrap();
        let a = family_obstruction(&p.diagram, 4, 1).unwrap();
        let (std, _) = Family::from_name("S4S3", &FamilyParams::new()).unwrap().build().unwrap();
        let b = family_obstruction(&std, 4, 1).unwrap();
        assert_eq!(a, b);
    }
}
