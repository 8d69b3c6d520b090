//! JSON schemas of each subcommand's standard output.

use serde_json::{json, Map, Value};

pub const COMMANDS: [&str; 12] = [
    "normalize",
    "laplaza-check",
    "coherence-exists",
    "coherence-equal",
    "model-eval",
    "strictify",
    "two-normalize",
    "two-equal",
    "glue",
    "gould",
    "selftest",
    "schema",
];

fn object(props: &[(&str, Value)]) -> Value {
    let mut properties = Map::new();
    for (k, v) in props {
        properties.insert((*k).to_string(), v.clone());
    }
    let required: Vec<&str> = props.iter().map(|(k, _)| *k).collect();
    json!({
        "type": "object",
        "properties": properties,
        "required": required,
    })
}

fn ty(t: &str) -> Value {
    json!({ "type": t })
}

fn nullable(t: Value) -> Value {
    json!({ "anyOf": [t, { "type": "null" }] })
}

fn array(items: Value) -> Value {
    json!({ "type": "array", "items": items })
}

fn one_of(values: &[&str]) -> Value {
    json!({ "type": "string", "enum": values })
}

fn laplaza() -> Value {
    one_of(&["full", "operadic", "laplaza-semiring"])
}

fn step() -> Value {
    object(&[
        ("position", array(ty("integer"))),
        ("before", ty("string")),
        ("after", ty("string")),
        ("pieces", array(ty("string"))),
    ])
}

fn path() -> Value {
    object(&[
        ("source", ty("string")),
        ("target", ty("string")),
        ("arity", ty("integer")),
        ("steps", array(step())),
    ])
}

fn rewrite() -> Value {
    json!({
        "type": "object",
        "properties": {
            "rule": { "type": "string", "enum": ["drop", "cancel", "swap", "collapse"] },
            "index": { "type": "integer" },
            "start": { "type": "integer" },
            "end": { "type": "integer" },
            "position": { "type": "array", "items": { "type": "integer" } },
            "mode": { "type": "string", "enum": ["identity", "linear"] },
        },
        "required": ["rule"],
    })
}

fn certificate() -> Value {
    object(&[
        ("signature", ty("string")),
        ("laplaza", laplaza()),
        ("left", path()),
        ("right", path()),
        ("derivation", array(rewrite())),
    ])
}

fn component() -> Value {
    object(&[
        ("in", array(ty("string"))),
        ("out", array(ty("string"))),
        ("genus", ty("integer")),
    ])
}

fn cobordism() -> Value {
    object(&[
        ("inbound", array(ty("string"))),
        ("outbound", array(ty("string"))),
        ("components", array(component())),
    ])
}

fn two_nf() -> Value {
    object(&[
        ("slots", array(ty("integer"))),
        ("cancel", ty("string")),
        ("source", array(ty("string"))),
        ("target", ty("string")),
        ("term", ty("string")),
    ])
}

fn verification() -> Value {
    object(&[("ok", ty("boolean")), ("witness", nullable(ty("string")))])
}

pub fn of(command: &str) -> Option<Value> {
    let body = match command {
        "normalize" => object(&[
            ("signature", ty("string")),
            ("arity", ty("integer")),
            ("term", ty("string")),
            ("normal_form", ty("string")),
        ]),
        "laplaza-check" => object(&[
            ("signature", ty("string")),
            ("laplaza", laplaza()),
            ("term", ty("string")),
            ("normal_form", ty("string")),
            ("member", ty("boolean")),
        ]),
        "coherence-exists" => object(&[
            ("signature", ty("string")),
            ("laplaza", laplaza()),
            ("source", ty("string")),
            ("target", ty("string")),
            (
                "verdict",
                one_of(&["found", "absent", "exhausted", "cap-exhausted"]),
            ),
            ("explored", nullable(ty("integer"))),
            ("path", nullable(path())),
        ]),
        "coherence-equal" => json!({
            "oneOf": [
                object(&[
                    ("verdict", one_of(&["forced-equal", "model-distinct", "unknown"])),
                    ("certificate", nullable(certificate())),
                    ("model_witness", nullable(ty("object"))),
                    ("explored", ty("integer")),
                ]),
                object(&[
                    ("verdict", one_of(&["replayed", "rejected"])),
                    ("reason", nullable(ty("string"))),
                    ("certificate", certificate()),
                ]),
            ]
        }),
        "model-eval" => object(&[
            ("signature", ty("string")),
            ("path", path()),
            (
                "model",
                one_of(&["strand-permutation", "monomial-bijection"]),
            ),
            ("value", json!({})),
            ("is_identity", ty("boolean")),
        ]),
        "strictify" => object(&[
            ("category", ty("string")),
            ("coherent", ty("boolean")),
            ("reason", nullable(ty("string"))),
            (
                "shuffle",
                nullable(object(&[
                    ("nontrivial_switch", array(ty("string"))),
                    ("dependent_pairs", array(array(ty("string")))),
                ])),
            ),
            (
                "report",
                nullable(object(&[
                    ("representatives", array(ty("string"))),
                    ("max_length", ty("integer")),
                    ("objects", array(ty("string"))),
                    ("functor_objects", array(array(ty("string")))),
                    ("morphisms", array(array(ty("string")))),
                    ("plus_objects", array(array(ty("string")))),
                    ("plus_morphisms", ty("integer")),
                    ("verify_strict", verification()),
                    ("verify_equivalence", verification()),
                ])),
            ),
        ]),
        "two-normalize" => object(&[
            ("term", ty("string")),
            ("arity", ty("integer")),
            ("source", array(ty("string"))),
            ("target", ty("string")),
            ("normal_form", two_nf()),
        ]),
        "two-equal" => object(&[
            ("left", ty("string")),
            ("right", ty("string")),
            ("equal", ty("boolean")),
            ("left_normal_form", two_nf()),
            ("right_normal_form", two_nf()),
            ("oracle", nullable(ty("boolean"))),
        ]),
        "glue" => object(&[
            ("labels", array(ty("string"))),
            ("result", cobordism()),
            ("total_genus", ty("integer")),
            ("components", ty("integer")),
        ]),
        "gould" => object(&[
            ("object", ty("string")),
            ("step", step()),
            ("forced", ty("boolean")),
            ("derivation", array(rewrite())),
            ("model_value", array(ty("integer"))),
            ("model_is_transposition", ty("boolean")),
            ("operadic_in_scope", ty("boolean")),
            (
                "operadic_verdict",
                one_of(&["forced-equal", "model-distinct", "unknown"]),
            ),
            ("discrepancy", ty("boolean")),
        ]),
        "selftest" => object(&[
            ("scale", one_of(&["quick", "full"])),
            ("seed", ty("integer")),
            (
                "criteria",
                array(object(&[
                    ("id", ty("integer")),
                    ("name", ty("string")),
                    ("passed", ty("boolean")),
                    ("detail", ty("object")),
                ])),
            ),
            ("passed", ty("boolean")),
        ]),
        "schema" => ty("object"),
        _ => return None,
    };
    let mut out = json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": command,
    });
    let map = out.as_object_mut().expect("literal object");
    if let Value::Object(fields) = body {
        map.extend(fields);
    }
    Some(out)
}

pub fn all() -> Value {
    let map: Map<String, Value> = COMMANDS
        .iter()
        .map(|c| {
            (
                (*c).to_string(),
                of(c).expect("every listed command has a schema"),
            )
        })
        .collect();
    Value::Object(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_command_has_a_schema() {
        for c in COMMANDS {
            assert_eq!(of(c).unwrap()["title"], c);
        }
        assert!(of("nope").is_none());
        assert_eq!(all().as_object().unwrap().len(), COMMANDS.len());
    }
}
