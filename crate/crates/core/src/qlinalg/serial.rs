//! JSON forms. Scalars are written as strings in lowest terms (`"3"`,
//! `"-1/2"`), so matrices round-trip exactly; on input, JSON integers are
//! accepted too. Floats never are.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Field, Filtration, LinalgError, Matrix, Ring, Subspace};

impl<T: Ring> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            (0..self.rows()).map(|i| self.row(i).iter().map(ToString::to_string).collect()).collect();
        rows.serialize(serializer)
    }
}

/// A scalar as it appears in JSON: `"p/q"` or an integer literal.
struct ScalarText(String);

impl<'de> Deserialize<'de> for ScalarText {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct Visitor;
        impl serde::de::Visitor<'_> for Visitor {
            type Value = ScalarText;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a rational string such as \"-3/4\"")
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<ScalarText, E> {
                Ok(ScalarText(v.to_string()))
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<ScalarText, E> {
                Ok(ScalarText(v.to_string()))
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<ScalarText, E> {
                Ok(ScalarText(v.to_owned()))
            }
        }
        deserializer.deserialize_any(Visitor)
    }
}

impl<'de, T: Ring> Deserialize<'de> for Matrix<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::<Vec<ScalarText>>::deserialize(deserializer)?
            .into_iter()
            .map(|r| r.into_iter().map(|s| s.0).collect())
            .collect();
        let parsed = rows
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|s| s.trim().parse::<T>().map_err(|_| LinalgError::Parse(s)))
                    .collect::<Result<Vec<T>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Matrix::from_rows(parsed).map_err(D::Error::custom)
    }
}

/// `#[serde(with = "scalars")]` for lists of scalars as `"p/q"` strings.
pub mod scalars {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::ScalarText;
    use crate::qlinalg::{LinalgError, Ring};

    pub fn serialize<T: Ring, S: Serializer>(v: &[T], serializer: S) -> Result<S::Ok, S::Error> {
        v.iter().map(ToString::to_string).collect::<Vec<_>>().serialize(serializer)
    }

    pub fn deserialize<'de, T: Ring, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<T>, D::Error> {
        Vec::<ScalarText>::deserialize(deserializer)?
            .into_iter()
            .map(|ScalarText(s)| s.trim().parse::<T>().map_err(|_| D::Error::custom(LinalgError::Parse(s))))
            .collect()
    }
}

impl<T: Field> Serialize for Subspace<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.basis().serialize(serializer)
    }
}

/// Reads any spanning set and stores its canonical basis.
impl<'de, T: Field> Deserialize<'de> for Subspace<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(Subspace::span(&Matrix::deserialize(deserializer)?))
    }
}

#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Ring", deserialize = "T: Ring"))]
pub struct StepJson<T> {
    pub index: i64,
    pub basis: Matrix<T>,
}

/// `{center, steps: [{index, basis}]}`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Ring", deserialize = "T: Ring"))]
pub struct FiltrationJson<T> {
    pub center: i64,
    pub steps: Vec<StepJson<T>>,
}

impl<T: Ring> fmt::Debug for StepJson<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W_{} = {}", self.index, self.basis)
    }
}

impl<T: Ring> fmt::Debug for FiltrationJson<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiltrationJson").field("center", &self.center).field("steps", &self.steps).finish()
    }
}

impl<T: Field> From<&Filtration<T>> for FiltrationJson<T> {
    fn from(f: &Filtration<T>) -> Self {
        FiltrationJson {
            center: f.center(),
            steps: f.steps().iter().map(|(&index, s)| StepJson { index, basis: s.basis().clone() }).collect(),
        }
    }
}

impl<T: Field> TryFrom<FiltrationJson<T>> for Filtration<T> {
    type Error = LinalgError;

    fn try_from(json: FiltrationJson<T>) -> Result<Self, LinalgError> {
        let ambient = json.steps.iter().map(|s| s.basis.rows()).max().unwrap_or(0);
        let steps: BTreeMap<i64, Subspace<T>> = json
            .steps
            .into_iter()
            .map(|s| {
                let cols = s.basis.cols();
                Ok((s.index, Subspace::span(&s.basis.reshape_empty(ambient, cols)?)))
            })
            .collect::<Result<_, LinalgError>>()?;
        Filtration::new(ambient, json.center, steps)
    }
}

impl<T: Field> Serialize for Filtration<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FiltrationJson::from(self).serialize(serializer)
    }
}

impl<'de, T: Field> Deserialize<'de> for Filtration<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Filtration::try_from(FiltrationJson::deserialize(deserializer)?).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use crate::{QFiltration, QMatrix, QSubspace, Q};

    #[test]
    fn matrix_json_uses_lowest_terms_strings() {
        let m = QMatrix::from_rows(vec![vec![Q::new(2.into(), 4.into()), Q::from_integer((-3).into())]]).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"[["1/2","-3"]]"#);
        let back: QMatrix = serde_json::from_str(r#"[["2/4", "-3/1"]]"#).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<QMatrix>(r#"[["x"]]"#).is_err());
        assert!(serde_json::from_str::<QMatrix>(r#"[["1"], []]"#).is_err());
    }

    #[test]
    fn integer_literals_are_accepted_floats_are_not() {
        let m: QMatrix = serde_json::from_str("[[0, 1], [-2, \"3/6\"]]").unwrap();
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"[["0","1"],["-2","1/2"]]"#);
        assert!(serde_json::from_str::<QMatrix>("[[0.5]]").is_err());
    }

    #[test]
    fn subspace_json_is_canonical_basis() {
        let s: QSubspace = serde_json::from_str(r#"[["2"], ["4"]]"#).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"[["1"],["2"]]"#);
    }

    #[test]
    fn filtration_json_round_trip() {
        let f = QFiltration::trivial(2, 3, 3);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(
            json,
            r#"{"center":3,"steps":[{"index":2,"basis":[[],[]]},{"index":3,"basis":[["1","0"],["0","1"]]}]}"#
        );
        let back: QFiltration = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }
}
