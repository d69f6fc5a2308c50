from .main import main
from .modelfile import Model, load_model, parse_model

__all__ = ["Model", "load_model", "main", "parse_model"]
