//! The built-in regression catalog of published Belyi functions, one file
//! per orbit, and the parser/serializer for the catalog entry format.

use crate::dessin::Passport;
use crate::error::{Error, Result};
use crate::numfield::{rational_from_string, rational_to_string, FieldElement, NumberField};
use rug::{Integer, Rational};

pub const FORMAT_HEADER: &str = "belyi-catalog v1";

/// One published Belyi function: defining field, the five monic polynomials
/// (R may be non-monic, as published) and the constant c, all with
/// power-basis coordinates.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub orbit: String,
    pub passport: Passport,
    pub field: NumberField,
    pub p3: Vec<FieldElement>,
    pub p1: Vec<FieldElement>,
    pub q2: Vec<FieldElement>,
    pub q1: Vec<FieldElement>,
    pub rr: Vec<FieldElement>,
    pub c: FieldElement,
}

fn parse_coords(field: &NumberField, tuple: &str) -> Result<FieldElement> {
    let coords: Vec<Rational> = tuple
        .split(',')
        .map(rational_from_string)
        .collect::<Result<_>>()?;
    field.from_coords(coords)
}

fn parse_poly(field: &NumberField, line: &str) -> Result<Vec<FieldElement>> {
    line.split(';').map(|t| parse_coords(field, t)).collect()
}

impl CatalogEntry {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().unwrap_or("");
        if header.trim() != FORMAT_HEADER {
            return Err(Error::Parse(format!(
                "unknown catalog header {header:?}, expected {FORMAT_HEADER:?}"
            )));
        }
        let mut fields = std::collections::HashMap::new();
        for line in lines {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad catalog line {line:?}")))?;
            fields.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get = |k: &str| -> Result<&String> {
            fields
                .get(k)
                .ok_or_else(|| Error::Parse(format!("catalog entry missing {k}=")))
        };
        let minpoly: Vec<Integer> = get("minpoly")?
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<Integer>()
                    .map_err(|_| Error::Parse(format!("bad minpoly coefficient {t:?}")))
            })
            .collect::<Result<_>>()?;
        let field = NumberField::new(minpoly)?;
        Ok(CatalogEntry {
            orbit: get("orbit")?.clone(),
            passport: Passport::parse(get("passport")?)?,
            p3: parse_poly(&field, get("P3")?)?,
            p1: parse_poly(&field, get("P1")?)?,
            q2: parse_poly(&field, get("Q2")?)?,
            q1: parse_poly(&field, get("Q1")?)?,
            rr: parse_poly(&field, get("R")?)?,
            c: parse_coords(&field, get("c")?)?,
            field,
        })
    }

    pub fn serialize(&self) -> String {
        let tuple = |el: &FieldElement| -> String {
            el.coords
                .iter()
                .map(rational_to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        let poly = |p: &[FieldElement]| -> String {
            p.iter().map(&tuple).collect::<Vec<_>>().join(";")
        };
        let minpoly = self
            .field
            .minpoly
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "{FORMAT_HEADER}\norbit={}\npassport={}\nminpoly={}\nP3={}\nP1={}\nQ2={}\nQ1={}\nR={}\nc={}\n",
            self.orbit,
            self.passport,
            minpoly,
            poly(&self.p3),
            poly(&self.p1),
            poly(&self.q2),
            poly(&self.q1),
            poly(&self.rr),
            tuple(&self.c),
        )
    }
}

macro_rules! entries {
    ($($file:literal),* $(,)?) => {
        [$(include_str!(concat!("../catalog/", $file, ".txt"))),*]
    };
}

/// All transcribed catalog entries, in ascending orbit order.
pub fn builtin() -> Result<Vec<CatalogEntry>> {
    entries![
        "6_1", "7_1", "7_2", "8_8", "8_15", "9_2", "9_4", "9_6", "10_1", "11_1", "12_4",
        "12_5", "12_13", "13_1", "14_1", "14_2", "17_1", "20_1", "24_1", "24_2",
    ]
    .iter()
    .map(|t| CatalogEntry::parse(t))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_catalog_parses() {
        let cat = builtin().unwrap();
        assert_eq!(cat.len(), 20);
        assert_eq!(cat[0].orbit, "6.1");
        assert_eq!(cat[0].field, NumberField::rationals());
        // 6.1: P3 = z^2 + 10z + 5
        let p3: Vec<String> = cat[0]
            .p3
            .iter()
            .map(|e| e.coords[0].to_string())
            .collect();
        assert_eq!(p3, vec!["5", "10", "1"]);
        // every entry's degrees follow its passport
        for e in &cat {
            assert_eq!(e.p3.len() - 1, e.passport.p3());
            assert_eq!(e.p1.len() - 1, e.passport.p1());
            assert_eq!(e.q2.len() - 1, e.passport.q2());
            assert_eq!(e.q1.len() - 1, e.passport.q1());
            assert_eq!(e.rr.len() - 1, e.passport.r());
        }
    }

    #[test]
    fn serialize_round_trips() {
        for e in builtin().unwrap() {
            let text = e.serialize();
            let back = CatalogEntry::parse(&text).unwrap();
            assert_eq!(back.serialize(), text, "round trip for {}", e.orbit);
        }
    }
}
