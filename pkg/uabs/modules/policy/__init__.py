import numpy as np

from uabs.core.data import DataBase, ConfigValueError
from uabs.modules.env import N_ACTIONS

PROB_FLOOR = 1e-30

class PolicyShapeError(ValueError):
    pass

class CheckpointError(ValueError):
    pass

class PolicyArch:
    # tanh hidden layers, softmax head over the 9 actions
    def __init__(self, input_dim: int, hidden: list[int]=(64,), output_dim: int=N_ACTIONS):
        if output_dim!=N_ACTIONS:
            raise ConfigValueError(f"Policy output must cover {N_ACTIONS} actions, got {output_dim}")
        if input_dim<1 or any(h<1 for h in hidden):
            raise ConfigValueError("Layer widths must be positive")
        self.input_dim = int(input_dim)
        self.hidden = [int(h) for h in hidden]
        self.output_dim = int(output_dim)

    @property
    def dims(self) -> list[int]:
        return [self.input_dim, *self.hidden, self.output_dim]

    @property
    def layer_shapes(self) -> list[tuple[int, int]]:
        dims = self.dims
        return list(zip(dims[:-1], dims[1:]))

    @property
    def n_params(self) -> int:
        return sum(fan_in*fan_out + fan_out for fan_in, fan_out in self.layer_shapes)

    def __eq__(self, other):
        return isinstance(other, PolicyArch) and self.dims==other.dims

    def __repr__(self):
        return f"PolicyArch({self.input_dim}, {self.hidden}, {self.output_dim})"

class PolicyParams(DataBase):
    def __init__(self, name: str = None, uuid: str = None, theta: np.ndarray=None, arch: PolicyArch=None) -> None:
        super().__init__(name, uuid)

        self.arch = arch
        self.theta = np.asarray(theta, dtype=np.float64) if theta is not None else np.zeros(arch.n_params)
        if self.theta.shape!=(arch.n_params,):
            raise PolicyShapeError(f"theta has {self.theta.size} entries, {arch} needs {arch.n_params}")

    def with_theta(self, theta: np.ndarray) -> "PolicyParams":
        return PolicyParams(name=self.name, theta=theta, arch=self.arch)

    def layers(self) -> list[tuple[np.ndarray, np.ndarray]]:
        # views (W: fan_in x fan_out, b: fan_out) into theta
        rst = []
        offset = 0
        for fan_in, fan_out in self.arch.layer_shapes:
            W = self.theta[offset:offset+fan_in*fan_out].reshape(fan_in, fan_out)
            offset += fan_in*fan_out
            b = self.theta[offset:offset+fan_out]
            offset += fan_out
            rst.append((W, b))
        return rst

    def __eq__(self, other):
        return isinstance(other, PolicyParams) and self.arch==other.arch and np.array_equal(self.theta, other.theta)
