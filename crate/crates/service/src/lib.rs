//! Stateless HTTP facade over the `ces-pareto` engine.
//!
//! | method | path               | body                | response                     |
//! |--------|--------------------|---------------------|------------------------------|
//! | GET    | `/healthz`         | –                   | `{"status":"ok","version"}`  |
//! | POST   | `/api/v1/evaluate` | scenario + `K`, `L` | criteria at the bundle       |
//! | POST   | `/api/v1/reduce`   | scenario            | membership map, rays, checks |
//! | POST   | `/api/v1/compare`  | scenario            | ray-formula discrepancy report |
//!
//! Bad input is answered with 400 and a `violations` list of
//! `{field, message}`; contradictory preferences with 422 and the names of
//! the violated inequalities. Neither touches the grid. At most
//! [`ServiceConfig::max_in_flight`] reductions run at once; further reduce
//! requests get 429. Compute time is reported in the `x-compute-ms` header so
//! that identical requests produce identical bodies.

pub mod compute;

use std::net::SocketAddr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Instant;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use ces_pareto::scenario::FieldViolation;
use ces_pareto::ScenarioSpec;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use compute::{ComputeError, EvaluateRequest};

pub const DEFAULT_PORT: u16 = 8080;
pub const DEFAULT_MAX_IN_FLIGHT: usize = 2;
pub const COMPUTE_TIME_HEADER: &str = "x-compute-ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ServiceConfig {
    /// Concurrent reduce computations allowed before answering 429.
    pub max_in_flight: usize,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            max_in_flight: DEFAULT_MAX_IN_FLIGHT,
        }
    }
}

/// Shared handler state: only the in-flight reduce counter.
#[derive(Debug, Clone)]
pub struct AppState {
    limit: usize,
    in_flight: Arc<AtomicUsize>,
}

/// Holds one reduce slot; releases it on drop.
#[derive(Debug)]
pub struct ReduceSlot {
    in_flight: Arc<AtomicUsize>,
}

impl Drop for ReduceSlot {
    fn drop(&mut self) {
        self.in_flight.fetch_sub(1, Ordering::AcqRel);
    }
}

impl AppState {
    pub fn new(config: ServiceConfig) -> Self {
        Self {
            limit: config.max_in_flight,
            in_flight: Arc::new(AtomicUsize::new(0)),
        }
    }

    /// Claims a reduce slot, or `None` when all are busy.
    pub fn try_acquire(&self) -> Option<ReduceSlot> {
        self.in_flight
            .fetch_update(Ordering::AcqRel, Ordering::Acquire, |n| {
                (n < self.limit).then_some(n + 1)
            })
            .ok()
            .map(|_| ReduceSlot {
                in_flight: Arc::clone(&self.in_flight),
            })
    }

    pub fn in_flight(&self) -> usize {
        self.in_flight.load(Ordering::Acquire)
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/healthz", get(healthz))
        .route("/api/v1/evaluate", post(evaluate))
        .route("/api/v1/reduce", post(reduce))
        .route("/api/v1/compare", post(compare))
        .with_state(state)
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(AppState::new(config))).await
}

// ---------------------------------------------------------------- responses

fn json_response(status: StatusCode, body: &impl Serialize) -> Response {
    match serde_json::to_vec(body) {
        Ok(bytes) => (
            status,
            [(
                header::CONTENT_TYPE,
                HeaderValue::from_static("application/json"),
            )],
            bytes,
        )
            .into_response(),
        Err(e) => internal(&e.to_string()),
    }
}

fn internal(message: &str) -> Response {
    let body = json!({"error": "internal", "message": message}).to_string();
    (
        StatusCode::INTERNAL_SERVER_ERROR,
        [(
            header::CONTENT_TYPE,
            HeaderValue::from_static("application/json"),
        )],
        body,
    )
        .into_response()
}

fn invalid(violations: &[FieldViolation]) -> Response {
    json_response(
        StatusCode::BAD_REQUEST,
        &json!({"error": "validation", "violations": violations}),
    )
}

fn error_response(error: &ComputeError) -> Response {
    match error {
        ComputeError::Invalid(v) => invalid(v),
        ComputeError::Inconsistent(names) => json_response(
            StatusCode::UNPROCESSABLE_ENTITY,
            &json!({"error": "consistency", "violated": names}),
        ),
        ComputeError::Internal(message) => internal(message),
    }
}

fn parse<T: DeserializeOwned>(body: &[u8]) -> Result<T, Response> {
    serde_json::from_slice(body).map_err(|e| {
        invalid(&[FieldViolation {
            field: "body".into(),
            message: e.to_string(),
        }])
    })
}

/// Runs a CPU-bound computation off the async workers and times it.
async fn run_blocking<T, F>(work: F) -> Response
where
    T: Serialize + Send + 'static,
    F: FnOnce() -> Result<T, ComputeError> + Send + 'static,
{
    let start = Instant::now();
    let outcome = tokio::task::spawn_blocking(work).await;
    let elapsed = start.elapsed().as_millis().to_string();
    let mut response = match outcome {
        Ok(Ok(value)) => json_response(StatusCode::OK, &value),
        Ok(Err(e)) => error_response(&e),
        Err(e) => internal(&e.to_string()),
    };
    if let Ok(value) = HeaderValue::from_str(&elapsed) {
        response.headers_mut().insert(COMPUTE_TIME_HEADER, value);
    }
    response
}

// ---------------------------------------------------------------- handlers

async fn healthz() -> Response {
    json_response(
        StatusCode::OK,
        &json!({"status": "ok", "version": env!("CARGO_PKG_VERSION")}),
    )
}

async fn evaluate(body: Bytes) -> Response {
    let request: EvaluateRequest = match parse(&body) {
        Ok(r) => r,
        Err(response) => return response,
    };
    match compute::evaluate(&request) {
        Ok(value) => json_response(StatusCode::OK, &value),
        Err(e) => error_response(&e),
    }
}

async fn reduce(State(state): State<AppState>, body: Bytes) -> Response {
    let spec: ScenarioSpec = match parse(&body) {
        Ok(s) => s,
        Err(response) => return response,
    };
    // Validation and consistency are decided before a slot is taken or any
    // grid node is evaluated.
    if let Err(e) = compute::fuzzy_scenario(&spec) {
        return error_response(&e);
    }
    let Some(slot) = state.try_acquire() else {
        return json_response(
            StatusCode::TOO_MANY_REQUESTS,
            &json!({"error": "busy", "message": "too many reductions in flight"}),
        );
    };
    run_blocking(move || {
        let _slot = slot;
        compute::reduce(&spec)
    })
    .await
}

async fn compare(body: Bytes) -> Response {
    let spec: ScenarioSpec = match parse(&body) {
        Ok(s) => s,
        Err(response) => return response,
    };
    if let Err(e) = compute::consistent_scenario(&spec) {
        return error_response(&e);
    }
    run_blocking(move || compute::compare(&spec)).await
}
