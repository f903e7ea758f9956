import logging

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from gauss_eof import config
from gauss_eof.routers.states import router as states_router
from gauss_eof.routers.sweeps import router as sweeps_router

logger = logging.getLogger(__name__)

# Запуск из корня репозитория:
# uvicorn main:app --host 0.0.0.0 --port $PORT

app = FastAPI(title="gauss-eof API")

# CORS: источники берутся из GAUSS_EOF_CORS_ORIGINS
app.add_middleware(
    CORSMiddleware,
    allow_origins=config.CORS_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(states_router)
app.include_router(sweeps_router)


@app.on_event("startup")
def on_startup():
    logging.basicConfig(level=getattr(logging, config.LOG_LEVEL, logging.WARNING))
    logger.info("=== GAUSS-EOF API STARTED ===")
    logger.info("grid points %d, tol_r %g, workers %d", config.GRID_POINTS, config.TOL_R, config.max_workers())


@app.get("/")
def root():
    return {"message": "gauss-eof API is running", "status": "ok"}


@app.get("/health")
def health_check():
    """Health check: одно вычисление энтропии через scipy."""
    from gauss_eof.eof import entropy_of_entanglement

    try:
        entropy_of_entanglement(0.5)
        return {"status": "healthy", "workers": config.max_workers()}
    except Exception as e:
        logger.warning("health check failed: %s", e)
        return {"status": "unhealthy", "error": str(e)}
