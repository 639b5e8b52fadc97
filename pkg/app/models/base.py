import dataclasses
import enum


class BaseModel:
    """
    Base class for the immutable records: common serialisation for all models
    """

    def to_dict(self):
        """Convert the record to a JSON-friendly dictionary"""
        out = {}
        for field in dataclasses.fields(self):
            out[field.name] = _plain(getattr(self, field.name))
        return out


def _plain(value):
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, BaseModel):
        return value.to_dict()
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value
