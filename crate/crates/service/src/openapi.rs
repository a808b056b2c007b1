use serde_json::{json, Value};

fn error_response(description: &str) -> Value {
    json!({
        "description": description,
        "content": { "application/json": { "schema": { "$ref": "#/components/schemas/Error" } } }
    })
}

fn json_response(description: &str, schema: Value) -> Value {
    json!({ "description": description, "content": { "application/json": { "schema": schema } } })
}

fn id_param() -> Value {
    json!([{ "name": "id", "in": "path", "required": true, "schema": { "type": "string" } }])
}

fn body(schema: Value) -> Value {
    json!({ "required": true, "content": { "application/json": { "schema": schema } } })
}

/// OpenAPI 3 description of every endpoint.
pub fn document() -> Value {
    let ids = json!({ "type": "array", "items": { "type": "string" } });
    let session = json!({ "$ref": "#/components/schemas/Session" });
    json!({
        "openapi": "3.0.3",
        "info": { "title": "p-skyline elicitation service", "version": env!("CARGO_PKG_VERSION") },
        "paths": {
            "/datasets": { "post": {
                "summary": "Upload a dataset as a schema and CSV text",
                "requestBody": body(json!({
                    "type": "object",
                    "required": ["schema", "csv"],
                    "properties": { "schema": { "type": "object" }, "csv": { "type": "string" } }
                })),
                "responses": {
                    "201": json_response("Dataset created", json!({
                        "type": "object",
                        "properties": { "id": { "type": "string" }, "rows": { "type": "integer" } }
                    })),
                    "400": error_response("Malformed schema or CSV")
                }
            }},
            "/datasets/{id}": { "get": {
                "summary": "Schema, rows and skyline of a dataset",
                "parameters": id_param(),
                "responses": {
                    "200": json_response("Dataset", json!({ "type": "object" })),
                    "404": error_response("Unknown dataset")
                }
            }},
            "/datasets/{id}/skyline": { "get": {
                "summary": "Ids of the skyline tuples",
                "parameters": id_param(),
                "responses": {
                    "200": json_response("Skyline", json!({ "type": "object", "properties": { "ids": ids } })),
                    "404": error_response("Unknown dataset")
                }
            }},
            "/sessions": { "post": {
                "summary": "Start an elicitation session on a dataset",
                "requestBody": body(json!({
                    "type": "object", "required": ["dataset"], "properties": { "dataset": { "type": "string" } }
                })),
                "responses": {
                    "201": json_response("Session snapshot", session.clone()),
                    "400": error_response("Malformed request"),
                    "404": error_response("Unknown dataset")
                }
            }},
            "/sessions/{id}/feedback": { "post": {
                "summary": "Add superior and inferior examples",
                "parameters": id_param(),
                "requestBody": body(json!({
                    "type": "object",
                    "properties": { "add_superior": ids, "add_inferior": ids }
                })),
                "responses": {
                    "200": json_response("Session snapshot", session.clone()),
                    "400": error_response("Unknown tuple id or contradictory feedback"),
                    "404": error_response("Unknown session"),
                    "409": error_response("A superior example is outside the skyline; details name its dominator"),
                    "422": error_response("Inferior examples are unsupported at this schema width")
                }
            }},
            "/sessions/{id}/elicit": { "post": {
                "summary": "Elicit a relation from all feedback so far and record a round",
                "parameters": id_param(),
                "responses": {
                    "200": json_response("Elicited relation", json!({
                        "type": "object",
                        "properties": {
                            "round": { "type": "integer" },
                            "expression": { "type": "string" },
                            "pgraph": { "$ref": "#/components/schemas/PGraph" },
                            "winnow": ids,
                            "explanation": { "type": "object" }
                        }
                    })),
                    "404": error_response("Unknown session"),
                    "409": error_response("No relation separates the superior from the inferior examples")
                }
            }},
            "/sessions/{id}/state": { "get": {
                "summary": "Full session snapshot including round history",
                "parameters": id_param(),
                "responses": {
                    "200": json_response("Session snapshot", session),
                    "404": error_response("Unknown session")
                }
            }},
            "/spec": { "get": {
                "summary": "This document",
                "responses": { "200": json_response("OpenAPI document", json!({ "type": "object" })) }
            }}
        },
        "components": { "schemas": {
            "Error": {
                "type": "object",
                "required": ["error", "message"],
                "properties": {
                    "error": { "type": "string" },
                    "message": { "type": "string" },
                    "details": { "type": "object" }
                }
            },
            "PGraph": {
                "type": "object",
                "properties": {
                    "nodes": ids,
                    "edges": { "type": "array", "items": ids }
                }
            },
            "Session": {
                "type": "object",
                "properties": {
                    "id": { "type": "string" },
                    "dataset": { "type": "string" },
                    "superior": ids,
                    "inferior": ids,
                    "pending": { "type": "object" },
                    "expression": { "type": "string" },
                    "pgraph": { "$ref": "#/components/schemas/PGraph" },
                    "winnow": ids,
                    "explanation": { "type": "object" },
                    "history": { "type": "array", "items": { "type": "object" } }
                }
            }
        }}
    })
}
