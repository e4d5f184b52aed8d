//! JSON file formats for forms and presentations.
//!
//! A form file lists the nonzero components with 1-based index tuples:
//!
//! ```json
//! {"dim": 2, "arity": 2, "entries": [{"idx": [1, 2], "c": "1"}, {"idx": [2, 1], "c": -1}]}
//! ```
//!
//! Coefficients are rational literals given as strings, or integers.
//! Entries are written in lexicographic index order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{Matrix, Scalar};
use crate::forms::MultilinearForm;
use crate::hopf::{AlgebraKind, HopfStructure, Presentation, Provenance};
use crate::ncalg::{Generator, NcPoly, TensorSquareElement, Word};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Coefficient {
    Int(i64),
    Text(String),
}

impl Coefficient {
    fn to_scalar(&self) -> Result<Scalar> {
        match self {
            Coefficient::Int(i) => Ok(Scalar::from_int(*i)),
            Coefficient::Text(s) => s.trim().parse(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryFile {
    idx: Vec<usize>,
    c: Coefficient,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormFile {
    dim: usize,
    arity: usize,
    entries: Vec<EntryFile>,
}

fn json_error(what: &str, e: serde_json::Error) -> Error {
    Error::Parse(format!(
        "{what}: line {} column {}: {e}",
        e.line(),
        e.column()
    ))
}

impl FormFile {
    fn from_form(w: &MultilinearForm) -> FormFile {
        FormFile {
            dim: w.dim(),
            arity: w.arity(),
            entries: w
                .entries()
                .map(|(idx, c)| EntryFile {
                    idx: idx.to_vec(),
                    c: Coefficient::Text(c.to_string()),
                })
                .collect(),
        }
    }

    fn to_form(&self) -> Result<MultilinearForm> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for (i, e) in self.entries.iter().enumerate() {
            let c =
                e.c.to_scalar()
                    .map_err(|err| Error::Parse(format!("entry #{}: {err}", i + 1)))?;
            entries.push((e.idx.clone(), c));
        }
        MultilinearForm::from_entries(self.dim, self.arity, entries)
    }
}

pub fn parse_form(text: &str) -> Result<MultilinearForm> {
    let file: FormFile = serde_json::from_str(text).map_err(|e| json_error("form file", e))?;
    file.to_form()
}

pub fn write_form(w: &MultilinearForm) -> String {
    let mut s = serde_json::to_string_pretty(&FormFile::from_form(w)).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoproductFile {
    gen: String,
    /// `[coefficient, left word, right word]`
    terms: Vec<(String, String, String)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CounitFile {
    gen: String,
    c: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AntipodeFile {
    gen: String,
    image: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureFile {
    coproduct: Vec<CoproductFile>,
    counit: Vec<CounitFile>,
    antipode: Option<Vec<AntipodeFile>>,
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ProvenanceFile {
    form: Option<FormFile>,
    twist: Option<Vec<Vec<String>>>,
    polar: Option<FormFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationFile {
    name: String,
    algebra: Option<String>,
    n: usize,
    m: usize,
    generators: Vec<String>,
    relations: Vec<String>,
    structure: Option<StructureFile>,
    #[serde(default)]
    provenance: ProvenanceFile,
}

fn parse_word(s: &str) -> Result<Word> {
    let p: NcPoly = s.parse()?;
    match p.leading() {
        Some((w, c)) if p.len() == 1 && c.is_one() => Ok(w.clone()),
        _ => Err(Error::Parse(format!("expected a single word, got {s:?}"))),
    }
}

fn matrix_rows(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|c| c.to_string()).collect())
        .collect()
}

pub fn write_presentation(p: &Presentation) -> String {
    let structure = p.structure.as_ref().map(|st| StructureFile {
        coproduct: st
            .coproduct
            .iter()
            .map(|(g, t)| CoproductFile {
                gen: g.to_string(),
                terms: t
                    .terms()
                    .map(|(a, b, c)| (c.to_string(), a.to_string(), b.to_string()))
                    .collect(),
            })
            .collect(),
        counit: st
            .counit
            .iter()
            .map(|(g, c)| CounitFile {
                gen: g.to_string(),
                c: c.to_string(),
            })
            .collect(),
        antipode: st.antipode.as_ref().map(|s| {
            s.iter()
                .map(|(g, img)| AntipodeFile {
                    gen: g.to_string(),
                    image: img.to_string(),
                })
                .collect()
        }),
    });
    let file = PresentationFile {
        name: p.name.clone(),
        algebra: p.kind.map(|k| k.short_name().to_string()),
        n: p.n,
        m: p.m,
        generators: p.alphabet.iter().map(|g| g.to_string()).collect(),
        relations: p.relations.iter().map(|r| r.to_string()).collect(),
        structure,
        provenance: ProvenanceFile {
            form: p.provenance.form.as_ref().map(FormFile::from_form),
            twist: p.provenance.twist.as_ref().map(matrix_rows),
            polar: p.provenance.polar.as_ref().map(FormFile::from_form),
        },
    };
    let mut s = serde_json::to_string_pretty(&file).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let file: PresentationFile =
        serde_json::from_str(text).map_err(|e| json_error("presentation file", e))?;
    let ctx = |what: String| move |e: Error| Error::Parse(format!("{what}: {e}"));
    let alphabet = file
        .generators
        .iter()
        .map(|g| {
            g.parse::<Generator>()
                .map_err(ctx(format!("generator {g:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let relations = file
        .relations
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.parse::<NcPoly>()
                .map_err(ctx(format!("relation #{}", i + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut p = Presentation::new(file.name, file.n, file.m, alphabet, relations);
    p.kind = match file.algebra.as_deref() {
        None => None,
        Some(s) => Some(
            AlgebraKind::from_short_name(s)
                .ok_or_else(|| Error::Parse(format!("unknown algebra {s:?}")))?,
        ),
    };
    if let Some(st) = file.structure {
        let mut coproduct = BTreeMap::new();
        for e in &st.coproduct {
            let g: Generator = e
                .gen
                .parse()
                .map_err(ctx(format!("coproduct of {:?}", e.gen)))?;
            let mut t = TensorSquareElement::zero();
            for (c, a, b) in &e.terms {
                let c: Scalar = c.parse().map_err(ctx(format!("coproduct of {g}")))?;
                t.add_term(parse_word(a)?, parse_word(b)?, &c);
            }
            coproduct.insert(g, t);
        }
        let mut counit = BTreeMap::new();
        for e in &st.counit {
            let g: Generator = e
                .gen
                .parse()
                .map_err(ctx(format!("counit of {:?}", e.gen)))?;
            counit.insert(
                g,
                e.c.parse().map_err(ctx(format!("counit of {:?}", e.gen)))?,
            );
        }
        let antipode = match &st.antipode {
            None => None,
            Some(list) => {
                let mut s = BTreeMap::new();
                for e in list {
                    let g: Generator = e
                        .gen
                        .parse()
                        .map_err(ctx(format!("antipode of {:?}", e.gen)))?;
                    s.insert(
                        g,
                        e.image
                            .parse()
                            .map_err(ctx(format!("antipode of {:?}", e.gen)))?,
                    );
                }
                Some(s)
            }
        };
        p.structure = Some(HopfStructure {
            coproduct,
            counit,
            antipode,
        });
    }
    let twist = match &file.provenance.twist {
        None => None,
        Some(rows) => Some(Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|c| c.parse()).collect::<Result<Vec<Scalar>>>())
                .collect::<Result<Vec<_>>>()?,
        )?),
    };
    p.provenance = Provenance {
        form: file
            .provenance
            .form
            .as_ref()
            .map(FormFile::to_form)
            .transpose()?,
        twist,
        polar: file
            .provenance
            .polar
            .as_ref()
            .map(FormFile::to_form)
            .transpose()?,
    };
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf;

    #[test]
    fn form_roundtrip() {
        for w in [
            MultilinearForm::cyclic2(),
            MultilinearForm::symplectic2(),
            MultilinearForm::signature(3, 3)
                .unwrap()
                .scale(&Scalar::ratio(1, 2)),
        ] {
            let text = write_form(&w);
            assert_eq!(parse_form(&text).unwrap(), w);
        }
    }

    #[test]
    fn form_inputs() {
        let w = parse_form(
            r#"{"dim":2,"arity":2,"entries":[{"idx":[1,2],"c":1},{"idx":[2,1],"c":"-1"}]}"#,
        )
        .unwrap();
        assert_eq!(w, MultilinearForm::symplectic2());
        let dup = r#"{"dim":2,"arity":2,"entries":[{"idx":[1,2],"c":1},{"idx":[1,2],"c":2}]}"#;
        assert!(parse_form(dup).is_err());
        let broken = "{\"dim\":2,\n\"arity\":2,\n\"entries\":[{\"idx\":[1,2],\"c\":}]}";
        match parse_form(broken) {
            Err(Error::Parse(msg)) => assert!(msg.contains("line 3"), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(parse_form(r#"{"dim":2,"arity":2,"entries":[{"idx":[1,3],"c":1}]}"#).is_err());
        assert!(parse_form(r#"{"dim":2,"arity":2,"entries":[{"idx":[1,2],"c":"1/0"}]}"#).is_err());
    }

    #[test]
    fn presentation_roundtrip() {
        let w2 = MultilinearForm::cyclic2();
        let polar = w2.polar().unwrap().particular;
        for p in [
            hopf::build_hw(&w2).unwrap(),
            hopf::build_bw(&w2).unwrap(),
            hopf::build_hww(&w2, &polar).unwrap(),
            hopf::build_ahmn(3, 2).unwrap(),
        ] {
            let text = write_presentation(&p);
            let back = parse_presentation(&text).unwrap();
            assert_eq!(back, p);
            assert_eq!(write_presentation(&back), text);
        }
    }
}
