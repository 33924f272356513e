//! The bundled example corpus: ten good filtrations exercising every
//! filtration kind, both analytic spreads, a singular base ring, and the
//! derived maximal-ideal machinery. All entries carry characteristic-free
//! invariants (monomial or toric data), so the default prime is safe.

use crate::config::JobConfig;
use crate::error::Result;

pub const BUNDLED: [(&str, &str); 10] = [
    (
        "adic-maximal",
        r#"
name = "adic-maximal"
[ring]
vars = ["x", "y"]
weights = [1, 1]
[filtration]
kind = "adic"
ideal = ["x", "y"]
"#,
    ),
    (
        "adic-m2",
        r#"
name = "adic-m2"
[ring]
vars = ["x", "y"]
weights = [1, 1]
[filtration]
kind = "adic"
ideal = ["x^2", "x*y", "y^2"]
"#,
    ),
    (
        "adic-principal",
        r#"
name = "adic-principal"
[ring]
vars = ["x", "y"]
weights = [1, 1]
[filtration]
kind = "adic"
ideal = ["x"]
"#,
    ),
    (
        "adic-x2-y2",
        r#"
name = "adic-x2-y2"
[ring]
vars = ["x", "y"]
weights = [1, 1]
[filtration]
kind = "adic"
ideal = ["x^2", "y^2"]
"#,
    ),
    (
        "adic-x2-xy",
        r#"
name = "adic-x2-xy"
[ring]
vars = ["x", "y"]
weights = [1, 1]
[filtration]
kind = "adic"
ideal = ["x^2", "x*y"]
"#,
    ),
    (
        "semigroup-345",
        r#"
name = "semigroup-345"
[ring]
vars = ["a", "b", "c"]
weights = [3, 4, 5]
quotient = ["b^2 - a*c", "b*c - a^3", "c^2 - a^2*b"]
[filtration]
kind = "adic"
ideal = ["a", "b", "c"]
"#,
    ),
    (
        "ratliff-rush",
        r#"
name = "ratliff-rush"
[ring]
vars = ["x", "y"]
weights = [1, 1]
[filtration]
kind = "ratliff_rush"
ideal = ["x^4", "x^3*y", "x*y^3", "y^4"]
rr_k_max = 3
"#,
    ),
    (
        "integral-closure-x3-y3",
        r#"
name = "integral-closure-x3-y3"
[ring]
vars = ["x", "y"]
weights = [1, 1]
[filtration]
kind = "integral_closure"
ideal = ["x^3", "y^3"]
"#,
    ),
    (
        "integral-closure-x2-y3",
        r#"
name = "integral-closure-x2-y3"
[ring]
vars = ["x", "y"]
weights = [1, 1]
[filtration]
kind = "integral_closure"
ideal = ["x^2", "y^3"]
"#,
    ),
    (
        "explicit-nonadic",
        r#"
name = "explicit-nonadic"
[ring]
vars = ["x", "y"]
weights = [1, 1]
[filtration]
kind = "explicit"
chain = [
  ["x^2", "y^2"],
  ["x^4", "x^3*y", "x^2*y^2", "x*y^3", "y^4"],
  ["x^6", "x^5*y", "x^4*y^2", "x^3*y^3", "x^2*y^4", "x*y^5", "y^6"],
]
"#,
    ),
];

pub fn bundled_configs() -> Result<Vec<JobConfig>> {
    BUNDLED
        .iter()
        .map(|(_, text)| JobConfig::parse_toml(text))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Budget;

    #[test]
    fn test_all_bundled_configs_parse_and_build() {
        let configs = bundled_configs().unwrap();
        assert_eq!(configs.len(), 10);
        let b = Budget::default();
        for cfg in &configs {
            let f = cfg.build_filtration(&b);
            assert!(f.is_ok(), "{}: {:?}", cfg.name, f.err());
        }
    }
}
