# Author: Muthana
# © 2026 Muthana. All rights reserved.
# Unauthorized copying or distribution is prohibited.


import logging
from datetime import datetime, timezone

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from . import config
from .cache import cache
from .lab_router import router as lab_router

config.configure_logging()
logger = logging.getLogger(__name__)

app = FastAPI(
    title="Krylab API",
    description="Krylov-distance delocalization experiments for the 2D random Schrödinger operator",
    version=config.APP_VERSION,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.on_event("shutdown")
async def shutdown_event():
    cache.clear()


@app.get("/health")
def health():
    return {
        "status": "healthy",
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "version": config.APP_VERSION,
        "cache": cache.stats(),
    }


@app.get("/")
def root():
    return {
        "message": f"Krylab API v{config.APP_VERSION} is running",
        "docs": "/docs",
        "health": "/health",
    }


app.include_router(lab_router)
