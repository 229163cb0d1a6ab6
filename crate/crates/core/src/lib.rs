//! Rule-based recognition, normalization and resolution of numerical and
//! temporal expressions, with dataset tooling and a four-level scorer.
//!
//! ```
//! use ntx_core::lang::load_config;
//! use ntx_core::model::AnchorContext;
//! use ntx_core::recognizer::recognize;
//!
//! let en = load_config("en").unwrap();
//! let anchor: AnchorContext = "2022-07-01".parse().unwrap();
//! let ms = recognize(&en, "Friday, 3 p.m. PST for $5", Some(&anchor)).unwrap();
//! let values: Vec<String> = ms.iter().map(|m| m.normalized.to_string()).collect();
//! assert_eq!(values, ["XXXX-WXX-5T15:00-08:00", "CUR(5,USD)"]);
//! assert_eq!(ms[0].resolutions.len(), 2);
//! ```

pub mod dataset;
pub mod datetime;
pub mod eval;
pub mod lang;
pub mod model;
pub mod number;
pub mod recognizer;
pub mod rules;
pub mod trie;
pub mod unit;
