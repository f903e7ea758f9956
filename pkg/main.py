# Позволяет запускать из корня репозитория: uvicorn main:app
# Приложение FastAPI живёт в gauss_eof.main
from gauss_eof.main import app

__all__ = ["app"]
