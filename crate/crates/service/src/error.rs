use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde_json::{json, Value};

/// An error response: a status code and a JSON body with a machine-readable
/// `error` kind, a human `message`, and optional details.
#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub kind: &'static str,
    pub message: String,
    pub details: Option<Value>,
}

impl ApiError {
    pub fn new(status: StatusCode, kind: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            kind,
            message: message.into(),
            details: None,
        }
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    pub fn not_found(what: &str, id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", format!("unknown {what} `{id}`"))
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = Some(details);
        self
    }

    pub fn body(&self) -> Value {
        let mut body = json!({ "error": self.kind, "message": self.message });
        if let Some(d) = &self.details {
            body["details"] = d.clone();
        }
        body
    }
}

impl From<pskyline::Error> for ApiError {
    fn from(e: pskyline::Error) -> Self {
        use pskyline::Error as E;
        match &e {
            E::NotFavorable { dominator, superior } => {
                ApiError::new(StatusCode::CONFLICT, "no_favoring_relation", e.to_string())
                    .with_details(json!({ "dominator": dominator, "superior": superior }))
            }
            E::TooWide { width, limit } => ApiError::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "inferior_examples_unsupported",
                format!(
                    "inferior examples need exhaustive search, which supports at most {limit} attributes; this dataset has {width}"
                ),
            )
            .with_details(json!({ "width": width, "limit": limit })),
            E::Internal(_) => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()),
            _ => ApiError::bad_request(e.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body())).into_response()
    }
}
