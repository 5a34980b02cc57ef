import sys
from pathlib import Path
from typing import TypeVar

from loguru import logger
from pydantic import BaseModel, ValidationError

ModelType = TypeVar("ModelType", bound=BaseModel)


class ElementStoreException(Exception):
    """
    Raised when a JSON document cannot be read, parsed, validated or written.

    Parameters
    ----------
    message : str, optional
        The error message describing the failure. Default is "Failed to access element document".
    """

    def __init__(self, message: str = "Failed to access element document"):
        super().__init__(message)


class ElementStore:
    """
    Reads and writes domain objects as JSON documents.

    Output is deterministic: fields are emitted in declaration order with aliases
    (e.g. "lambda", "omega_D"), two-space indentation and a trailing newline, so the same
    object always serializes to the same bytes.

    Methods
    -------
    dumps(model)
        Serializes a model to a JSON string.
    emit(model, output_path=None)
        Writes a model to a file, or to stdout when no path is given.
    load(path, model_type)
        Parses and validates a JSON file as the given model type.
    """

    @staticmethod
    def dumps(model: BaseModel) -> str:
        return model.model_dump_json(by_alias=True, indent=2) + "\n"

    def emit(self, model: BaseModel, output_path: Path | None = None):
        """
        Writes the serialized model to `output_path`, or to stdout when it is None.

        Raises
        ------
        ElementStoreException
            If the file cannot be written.
        """

        document = self.dumps(model)

        if output_path is None:
            sys.stdout.write(document)
            sys.stdout.flush()
            return

        try:
            Path(output_path).write_text(document, encoding="utf-8")
            logger.info(f"Wrote {type(model).__name__} to {output_path}")
        except OSError as e:
            error_message = f"Could not write {output_path} - {e}"
            logger.error(error_message)
            raise ElementStoreException(error_message)

    @staticmethod
    def loads(document: str, model_type: type[ModelType]) -> ModelType:
        try:
            return model_type.model_validate_json(document)
        except ValidationError as e:
            error_message = f"Invalid {model_type.__name__} document - {e}"
            logger.error(error_message)
            raise ElementStoreException(error_message)

    def load(self, path: Path, model_type: type[ModelType]) -> ModelType:
        """
        Reads `path` and validates its content as `model_type`.

        Parameters
        ----------
        path : Path
            The JSON file to read.
        model_type : type[BaseModel]
            The expected domain type.

        Returns
        -------
        BaseModel
            The validated object.

        Raises
        ------
        ElementStoreException
            If the file is missing or unreadable, is not JSON, or does not validate.
        """

        try:
            document = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            error_message = f"Could not read {path} - {e}"
            logger.error(error_message)
            raise ElementStoreException(error_message)

        return self.loads(document, model_type)
