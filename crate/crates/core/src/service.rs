//! HTTP API over an immutable (corpus, index) snapshot.
//!
//! | route              | method | body                                     |
//! |--------------------|--------|------------------------------------------|
//! | `/api/facets`      | GET    | `{"facets": {name: [values…]}}`           |
//! | `/api/search`      | GET    | `{"total", "hits": [...], "query"}`       |
//! | `/api/reload`      | POST   | `{"status": "ok", "listings": n}`         |
//!
//! Every non-success response carries an [`ApiError`] body. Each request
//! loads the current snapshot once and answers entirely from it; a reload
//! builds a new snapshot off to the side and swaps it in atomically.

use crate::corpus::{load_corpus, Corpus, CorpusError, SearchField};
use crate::index::{build_index, BoundaryIndex};
use crate::search::{
    execute_search, hit_records, HitRecord, SearchError, SearchMode, SearchQuery, DEFAULT_LIMIT,
};
use arc_swap::ArcSwap;
use axum::body::Bytes;
use axum::extract::{RawQuery, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::any;
use axum::Router;
use serde::Serialize;
use serde_json::{json, Value};
use std::fs::File;
use std::io::BufReader;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use thiserror::Error;
use tokio::net::TcpListener;
use tokio::sync::{oneshot, Mutex};
use tokio::task::JoinHandle;

/// Overrides [`ServiceConfig::corpus_path`] when set.
pub const CORPUS_ENV: &str = "BOUNDSEARCH_CORPUS";

/// Response header carrying the snapshot version a response was built from.
pub const SNAPSHOT_HEADER: &str = "x-snapshot-version";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ServiceConfig {
    pub corpus_path: PathBuf,
    pub bind_address: String,
    pub allow_reload: bool,
    pub default_limit: usize,
}

impl ServiceConfig {
    pub fn new(corpus_path: impl Into<PathBuf>) -> Self {
        ServiceConfig {
            corpus_path: corpus_path.into(),
            bind_address: "127.0.0.1:8080".into(),
            allow_reload: false,
            default_limit: DEFAULT_LIMIT,
        }
    }

    /// Applies the `BOUNDSEARCH_CORPUS` override, if present.
    pub fn with_env_override(mut self) -> Self {
        if let Some(path) = std::env::var_os(CORPUS_ENV) {
            self.corpus_path = path.into();
        }
        self
    }
}

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("cannot open corpus {}: {source}", path.display())]
    CorpusUnreadable {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid corpus {}: {source}", path.display())]
    CorpusInvalid { path: PathBuf, source: CorpusError },
    #[error("cannot bind {address}: {source}")]
    Bind {
        address: String,
        source: std::io::Error,
    },
    #[error("default_limit must be at least 1")]
    BadConfig,
}

/// One consistent view of the data.
#[derive(Debug)]
pub struct Snapshot {
    pub version: u64,
    pub corpus: Corpus,
    pub index: BoundaryIndex,
}

impl Snapshot {
    pub fn new(version: u64, corpus: Corpus) -> Self {
        let index = build_index(&corpus);
        Snapshot {
            version,
            corpus,
            index,
        }
    }

    pub fn load(path: &Path, version: u64) -> Result<Self, ServiceError> {
        let file = File::open(path).map_err(|source| ServiceError::CorpusUnreadable {
            path: path.to_owned(),
            source,
        })?;
        let corpus =
            load_corpus(BufReader::new(file)).map_err(|source| ServiceError::CorpusInvalid {
                path: path.to_owned(),
                source,
            })?;
        Ok(Snapshot::new(version, corpus))
    }
}

/// Client-facing error body.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

/// The closed set of [`ApiError::code`] values.
pub const ERROR_CODES: [&str; 5] = [
    "pattern_syntax",
    "unknown_facet",
    "unknown_value",
    "too_many_words",
    "bad_parameter",
];

impl ApiError {
    pub fn bad_parameter(message: impl Into<String>, detail: Option<Value>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            code: "bad_parameter",
            message: message.into(),
            detail,
        }
    }

    fn with_status(mut self, status: StatusCode) -> Self {
        self.status = status;
        self
    }
}

impl From<SearchError> for ApiError {
    fn from(e: SearchError) -> Self {
        let detail = match &e {
            SearchError::PatternSyntax(p) => Some(json!({ "offset": p.offset() })),
            SearchError::Boundary(b) => Some(match b {
                crate::index::BoundaryError::UnknownFacet(f) => json!({ "field": f }),
                crate::index::BoundaryError::UnknownValue { facet, value } => {
                    json!({ "field": facet, "value": value })
                }
            }),
            SearchError::TooManyWords { count } => Some(json!({ "count": count })),
            _ => None,
        };
        ApiError {
            status: StatusCode::BAD_REQUEST,
            code: e.code(),
            message: e.to_string(),
            detail,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        json_response(self.status, &self, None)
    }
}

/// Body of a successful `/api/search`.
#[derive(Clone, Debug, Serialize)]
pub struct SearchResponse {
    pub total: usize,
    pub hits: Vec<HitRecord>,
    pub query: SearchQuery,
}

/// Decodes `/api/search` query parameters.
pub fn parse_search_params<'a, I>(pairs: I, default_limit: usize) -> Result<SearchQuery, ApiError>
where
    I: IntoIterator<Item = (&'a str, &'a str)>,
{
    let mut query = SearchQuery {
        limit: default_limit,
        ..SearchQuery::default()
    };
    let mut seen: Vec<&str> = Vec::new();
    for (key, value) in pairs {
        if seen.contains(&key) {
            return Err(ApiError::bad_parameter(
                format!("parameter {key} given more than once"),
                Some(json!({ "field": key })),
            ));
        }
        seen.push(key);
        let bad = |what: &str| {
            ApiError::bad_parameter(
                format!("invalid {key}: {what}"),
                Some(json!({ "field": key })),
            )
        };
        match key {
            "q" => query.pattern_text = value.to_string(),
            "mode" => query.mode = value.parse::<SearchMode>().map_err(|e| bad(&e))?,
            "case" => {
                query.case_sensitive = match value {
                    "0" => false,
                    "1" => true,
                    _ => return Err(bad("expected 0 or 1")),
                }
            }
            "fields" => {
                query.fields = value
                    .split(',')
                    .map(|f| SearchField::from_name(f.trim()).map_err(|e| bad(&e.to_string())))
                    .collect::<Result<_, _>>()?;
            }
            "limit" => {
                query.limit = value
                    .parse()
                    .ok()
                    .filter(|&n: &usize| n >= 1)
                    .ok_or_else(|| bad("expected a positive integer"))?
            }
            "offset" => {
                query.offset = value
                    .parse()
                    .map_err(|_| bad("expected a non-negative integer"))?
            }
            _ => match key.strip_prefix("facet.") {
                // An empty value means "any".
                Some(_) if value.is_empty() => {}
                Some(facet) => {
                    query.boundaries.insert(facet, value);
                }
                None => {
                    return Err(ApiError::bad_parameter(
                        format!("unknown parameter {key}"),
                        Some(json!({ "field": key })),
                    ))
                }
            },
        }
    }
    Ok(query)
}

/// Runs a decoded query against one snapshot.
pub fn search_snapshot(snapshot: &Snapshot, query: &SearchQuery) -> Result<SearchResponse, ApiError> {
    let page = execute_search(&snapshot.corpus, &snapshot.index, query)?;
    let hits = hit_records(&snapshot.corpus, &page)?;
    Ok(SearchResponse {
        total: page.total,
        hits,
        query: page.query,
    })
}

/// Shared state behind the router.
pub struct AppState {
    config: ServiceConfig,
    snapshot: ArcSwap<Snapshot>,
    next_version: AtomicU64,
    reload_lock: Mutex<()>,
}

impl AppState {
    /// Loads the corpus named by `config` as snapshot version 1.
    pub fn load(config: ServiceConfig) -> Result<Arc<Self>, ServiceError> {
        if config.default_limit == 0 {
            return Err(ServiceError::BadConfig);
        }
        let snapshot = Snapshot::load(&config.corpus_path, 1)?;
        Ok(Arc::new(AppState {
            config,
            snapshot: ArcSwap::from_pointee(snapshot),
            next_version: AtomicU64::new(2),
            reload_lock: Mutex::new(()),
        }))
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.config
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.snapshot.load_full()
    }

    /// Re-reads the corpus and swaps it in. On failure the old snapshot
    /// keeps serving. Returns the new listing count.
    pub async fn reload(&self) -> Result<usize, ServiceError> {
        let _writer = self.reload_lock.lock().await;
        let path = self.config.corpus_path.clone();
        let version = self.next_version.fetch_add(1, Ordering::SeqCst);
        let snapshot = tokio::task::spawn_blocking(move || Snapshot::load(&path, version))
            .await
            .expect("snapshot loader panicked")?;
        let listings = snapshot.corpus.len();
        self.snapshot.store(Arc::new(snapshot));
        Ok(listings)
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/facets", any(facets))
        .route("/api/search", any(search))
        .route("/api/reload", any(reload))
        .fallback(not_found)
        .with_state(state)
}

fn json_response<T: Serialize>(status: StatusCode, body: &T, version: Option<u64>) -> Response {
    let bytes = serde_json::to_vec(body).expect("serializable body");
    let mut response = (status, Bytes::from(bytes)).into_response();
    let headers = response.headers_mut();
    headers.insert(
        header::CONTENT_TYPE,
        HeaderValue::from_static("application/json; charset=utf-8"),
    );
    if let Some(v) = version {
        headers.insert(SNAPSHOT_HEADER, HeaderValue::from(v));
    }
    response
}

fn method_not_allowed(allowed: &str) -> ApiError {
    ApiError::bad_parameter(format!("method not allowed; use {allowed}"), None)
        .with_status(StatusCode::METHOD_NOT_ALLOWED)
}

async fn facets(State(state): State<Arc<AppState>>, method: Method) -> Response {
    if method != Method::GET {
        return method_not_allowed("GET").into_response();
    }
    let snapshot = state.snapshot();
    let body = json!({ "facets": snapshot.corpus.schema() });
    json_response(StatusCode::OK, &body, Some(snapshot.version))
}

async fn search(
    State(state): State<Arc<AppState>>,
    method: Method,
    RawQuery(raw): RawQuery,
) -> Response {
    if method != Method::GET {
        return method_not_allowed("GET").into_response();
    }
    let raw = raw.unwrap_or_default();
    let pairs: Vec<(String, String)> = form_urlencoded::parse(raw.as_bytes())
        .into_owned()
        .collect();
    let snapshot = state.snapshot();
    let result = parse_search_params(
        pairs.iter().map(|(k, v)| (k.as_str(), v.as_str())),
        state.config.default_limit,
    )
    .and_then(|query| search_snapshot(&snapshot, &query));
    match result {
        Ok(body) => json_response(StatusCode::OK, &body, Some(snapshot.version)),
        Err(e) => json_response(e.status, &e, Some(snapshot.version)),
    }
}

async fn reload(State(state): State<Arc<AppState>>, method: Method) -> Response {
    if method != Method::POST || !state.config.allow_reload {
        let mut e = method_not_allowed("POST");
        if !state.config.allow_reload {
            e.message = "reload is disabled".into();
        }
        return e.into_response();
    }
    match state.reload().await {
        Ok(listings) => {
            let version = state.snapshot().version;
            json_response(
                StatusCode::OK,
                &json!({ "status": "ok", "listings": listings }),
                Some(version),
            )
        }
        Err(e) => {
            let detail = match &e {
                ServiceError::CorpusInvalid { source, .. } => {
                    source.line().map(|line| json!({ "line": line }))
                }
                _ => None,
            };
            ApiError::bad_parameter(format!("reload failed: {e}"), detail)
                .with_status(StatusCode::INTERNAL_SERVER_ERROR)
                .into_response()
        }
    }
}

async fn not_found() -> Response {
    ApiError::bad_parameter("no such endpoint", None)
        .with_status(StatusCode::NOT_FOUND)
        .into_response()
}

/// A running server. Dropping the handle leaves the server running; call
/// [`ServiceHandle::shutdown`] to stop it.
pub struct ServiceHandle {
    local_addr: SocketAddr,
    state: Arc<AppState>,
    shutdown: oneshot::Sender<()>,
    task: JoinHandle<std::io::Result<()>>,
}

impl ServiceHandle {
    pub fn local_addr(&self) -> SocketAddr {
        self.local_addr
    }

    pub fn state(&self) -> &Arc<AppState> {
        &self.state
    }

    pub async fn shutdown(self) -> std::io::Result<()> {
        let _ = self.shutdown.send(());
        self.task.await.expect("server task panicked")
    }

    /// Waits until the server exits on its own.
    pub async fn wait(self) -> std::io::Result<()> {
        let ServiceHandle { shutdown, task, .. } = self;
        let result = task.await.expect("server task panicked");
        drop(shutdown);
        result
    }
}

/// Loads the corpus, binds, and starts serving in the background.
pub async fn start_service(config: ServiceConfig) -> Result<ServiceHandle, ServiceError> {
    let state = AppState::load(config)?;
    let address = state.config.bind_address.clone();
    let listener = TcpListener::bind(&address)
        .await
        .map_err(|source| ServiceError::Bind {
            address: address.clone(),
            source,
        })?;
    let local_addr = listener
        .local_addr()
        .map_err(|source| ServiceError::Bind { address, source })?;
    let (tx, rx) = oneshot::channel::<()>();
    let app = router(state.clone());
    let task = tokio::spawn(async move {
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = rx.await;
            })
            .await
    });
    Ok(ServiceHandle {
        local_addr,
        state,
        shutdown: tx,
        task,
    })
}
