import hashlib
import json
from enum import IntEnum, Enum
from typing import Any
from uuid import uuid4

import numpy as np

class NodeBase:
    def __init__(self, name: str=None, uuid: str=None) -> None:
        self._hash = None

        self.name = name
        self._uuid = uuid or str(uuid4()) # _ to avoid shown in construct_config

    @property
    def uuid(self):
        return self._uuid

    def calc_hash(self) -> str:
        canonical = json.dumps(self.get_construct_config(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf8")).hexdigest()

    def get_hash(self, force_recalc=False):
        if self._hash is None or force_recalc:
            self._hash = self.calc_hash()
        return self._hash

    def get_construct_config(self) -> dict:
        raise NotImplementedError

    def apply_construct_config(self, construct_config: dict):
        raise NotImplementedError



class DataNode(NodeBase):
    BASICTYPES = (int, float, str, bool)
    @staticmethod
    def Value2BasicTypes(v):
        if v is None or type(v) in DataNode.BASICTYPES: # `isinstance` not enough because e.g. `np.float64` is subclass of `float`
            return v
        elif isinstance(v, Enum):
            return v.name
        elif isinstance(v, (np.generic, np.ndarray)):
            return v.tolist()
        elif isinstance(v, (list, tuple)):
            return [DataNode.Value2BasicTypes(e) for e in v]
        elif isinstance(v, dict):
            return {k: DataNode.Value2BasicTypes(e) for k, e in v.items()}
        elif isinstance(v, DataNode):
            return v.get_construct_config()
        else:
            return f"<{type(v).__name__}>"

    def get_construct_config(self) -> dict:
        return {
            k: DataNode.Value2BasicTypes(v)
            for k, v in self.__dict__.items()
            if not k.startswith("_") and k!="name"
        }



class ActionNode(NodeBase):
    CAPTION = "Not implemented action"

    class ActionStatus(IntEnum):
        INIT = 0
        CONFIGURED = 1
        COMPLETE = 2
        FAILED = -1

    def __init__(self, name: str = None, uuid: str = None) -> None:
        super().__init__(name=name or self.CAPTION, uuid=uuid)

        self.status = ActionNode.ActionStatus.INIT

    def __call__(self, *args: Any, **kwds: Any) -> Any:
        raise NotImplementedError

    def get_construct_config(self) -> dict:
        return {"name": self.name}

    def run(self, *args, **kwargs):
        self.pre_run(*args, **kwargs)
        try:
            rst = self(*args, **kwargs)
        except Exception:
            self.status = ActionNode.ActionStatus.FAILED
            raise
        self.status = ActionNode.ActionStatus.COMPLETE
        self.post_run(*args, **kwargs)
        return rst

    def pre_run(self, *args, **kwargs):
        ...

    def post_run(self, *args, **kwargs):
        ...
