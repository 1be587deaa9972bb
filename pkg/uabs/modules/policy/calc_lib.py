import numpy as np
from scipy.special import log_softmax, softmax

from uabs.modules.env import Action
from . import PolicyArch, PolicyParams, PolicyShapeError, PROB_FLOOR

def init_params(arch: PolicyArch, rng: np.random.Generator) -> PolicyParams:
    # fan-balanced uniform weights, zero biases
    chunks = []
    for fan_in, fan_out in arch.layer_shapes:
        limit = np.sqrt(6 / (fan_in+fan_out))
        chunks.append(rng.uniform(-limit, limit, size=fan_in*fan_out))
        chunks.append(np.zeros(fan_out))
    return PolicyParams(theta=np.concatenate(chunks), arch=arch)

def _forward(p: PolicyParams, X: np.ndarray) -> tuple[list[np.ndarray], np.ndarray]:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1]!=p.arch.input_dim:
        raise PolicyShapeError(f"Features have {X.shape[1]} entries, policy expects {p.arch.input_dim}")
    layers = p.layers()
    hs = [X]
    for W, b in layers[:-1]:
        hs.append(np.tanh(hs[-1]@W + b))
    W, b = layers[-1]
    return hs, hs[-1]@W + b

def log_probs(p: PolicyParams, X: np.ndarray) -> np.ndarray:
    # (n, 9) log pi(.|s) for a batch of feature rows
    _, logits = _forward(p, X)
    return log_softmax(logits, axis=-1)

def action_probs(p: PolicyParams, features: np.ndarray) -> np.ndarray:
    features = np.asarray(features, dtype=float)
    if features.ndim!=1:
        raise PolicyShapeError("action_probs takes a single feature vector")
    _, logits = _forward(p, features)
    return softmax(logits[0])

def sample_action(rng: np.random.Generator, probs: np.ndarray) -> tuple[Action, float]:
    a = int(rng.choice(len(probs), p=probs))
    return Action(a), float(probs[a])

def score_sum(p: PolicyParams, X: np.ndarray, actions, weights) -> np.ndarray:
    r"""Weighted sum of score functions.

    Returns :math:`\sum_t w_t \nabla_\theta \log\pi_\theta(a_t|s_t)` as a
    vector laid out like `p.theta`, by backpropagation through the net.
    """
    actions = np.asarray(actions, dtype=int)
    weights = np.asarray(weights, dtype=float)
    hs, logits = _forward(p, X)
    P = softmax(logits, axis=-1)

    delta = -P
    delta[np.arange(len(actions)), actions] += 1
    delta *= weights[:, None] # d/dlogits

    layers = p.layers()
    grads = [None] * len(layers)
    for l in range(len(layers)-1, -1, -1):
        W, _ = layers[l]
        h_in = hs[l]
        grads[l] = ((h_in.T@delta).ravel(), delta.sum(axis=0))
        if l>0:
            delta = (delta@W.T) * (1 - h_in**2) # tanh'
    return np.concatenate([g for gW_gb in grads for g in gW_gb])

def log_prob_grad(p: PolicyParams, features: np.ndarray, a: Action) -> np.ndarray:
    return score_sum(p, np.asarray(features, dtype=float)[None, :], [int(a)], [1.0])

def nll(p: PolicyParams, X: np.ndarray, actions) -> float:
    # -sum log pi(a_t|s_t), probabilities floored
    actions = np.asarray(actions, dtype=int)
    lp = log_probs(p, X)[np.arange(len(actions)), actions]
    return float(-np.sum(np.maximum(lp, np.log(PROB_FLOOR))))

def numerical_gradient(f, theta: np.ndarray, h: float=1e-5) -> np.ndarray:
    # central differences of a scalar function of a flat vector
    grad = np.zeros_like(theta)
    x = theta.copy()
    for j in range(len(x)):
        xj = x[j]
        x[j] = xj + h
        f_plus = f(x)
        x[j] = xj - h
        f_minus = f(x)
        x[j] = xj
        grad[j] = (f_plus - f_minus) / (2*h)
    return grad
