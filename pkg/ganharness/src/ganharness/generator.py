"""Numpy forward pass for the desk-scale conditional generator.

The network is a small deconvolution stack: a linear layer lifts the
110-dim latent row (100 random dims plus the 10-way one-hot class block)
to a 4x4 feature map, four nearest-upsample + 3x3 convolution blocks grow
it to 64x64, and a final convolution with tanh emits RGB in [-1, 1].
Inference is plain numpy so a checkpoint fully determines the output:
the same latent file and checkpoint always produce identical images.

Training lives in tools/train_generator.py; checkpoints use the GANC
container (see checkpoint.py) and carry the architecture description.
"""

from __future__ import annotations

import numpy as np

from .checkpoint import GeneratorCheckpoint, read_checkpoint
from .errors import ValidationError
from .gimg import ImageBatch
from .latf import LatentFile

ARCH_FAMILY = "cond-deconv"
DEFAULT_CHANNELS = (128, 64, 32, 16, 8)
DEFAULT_LEAK = 0.2
BASE_SIZE = 4

# Rows per forward chunk. Fixed rather than configurable: BLAS accumulation
# order varies with matrix shape, so a different chunk size could shift a
# pixel across a quantization boundary; pinning it makes image bytes a pure
# function of latent file plus checkpoint.
FORWARD_CHUNK = 64


def _lrelu(x: np.ndarray, leak: float) -> np.ndarray:
    return np.maximum(x, np.float32(leak) * x)


def _conv3x3(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Stride-1 same-padding 3x3 convolution, NCHW."""
    n, _, h, width = x.shape
    xp = np.pad(x, ((0, 0), (0, 0), (1, 1), (1, 1)))
    acc = np.zeros((w.shape[0], n, h, width), dtype=np.float32)
    for di in range(3):
        for dj in range(3):
            patch = xp[:, :, di : di + h, dj : dj + width]
            acc += np.tensordot(w[:, :, di, dj], patch, axes=([1], [1]))
    return acc.transpose(1, 0, 2, 3) + b[None, :, None, None]


def _upsample2(x: np.ndarray) -> np.ndarray:
    return np.repeat(np.repeat(x, 2, axis=2), 2, axis=3)


def validate_architecture(ckpt: GeneratorCheckpoint) -> dict:
    """Check the checkpoint describes a network this module can run."""
    arch = ckpt.arch
    if arch.get("family") != ARCH_FAMILY:
        raise ValidationError(f"unsupported generator family {arch.get('family')!r}")
    channels = tuple(int(c) for c in arch.get("channels", ()))
    if len(channels) < 2:
        raise ValidationError("architecture needs at least two channel stages")
    latent_dims = int(arch.get("latent_dims", 0))
    if latent_dims < 1:
        raise ValidationError("architecture must state latent_dims")
    size = BASE_SIZE * 2 ** (len(channels) - 1)
    if int(arch.get("image_size", 0)) != size:
        raise ValidationError(
            f"channel plan implies {size}x{size} images, "
            f"arch declares {arch.get('image_size')}"
        )

    expected = {
        "fc_w": (channels[0] * BASE_SIZE * BASE_SIZE, latent_dims),
        "fc_b": (channels[0] * BASE_SIZE * BASE_SIZE,),
        "out_w": (3, channels[-1], 3, 3),
        "out_b": (3,),
    }
    for i in range(1, len(channels)):
        expected[f"conv{i}_w"] = (channels[i], channels[i - 1], 3, 3)
        expected[f"conv{i}_b"] = (channels[i],)
    for name, shape in expected.items():
        if ckpt.tensor(name).shape != shape:
            raise ValidationError(
                f"tensor {name!r} has shape {ckpt.tensor(name).shape}, "
                f"expected {shape}"
            )
    return {
        "channels": channels,
        "latent_dims": latent_dims,
        "leak": float(arch.get("leak", DEFAULT_LEAK)),
    }


def forward(ckpt: GeneratorCheckpoint, latents: np.ndarray) -> np.ndarray:
    """Map latent rows (n, latent_dims) to float images (n, 3, H, W)."""
    spec = validate_architecture(ckpt)
    z = np.asarray(latents, dtype=np.float32)
    if z.ndim != 2 or z.shape[1] != spec["latent_dims"]:
        raise ValidationError(
            f"latent rows have {z.shape[1] if z.ndim == 2 else z.ndim} dims, "
            f"checkpoint expects {spec['latent_dims']}"
        )
    leak = spec["leak"]
    channels = spec["channels"]
    x = z @ ckpt.tensor("fc_w").T + ckpt.tensor("fc_b")
    x = _lrelu(x, leak).reshape(z.shape[0], channels[0], BASE_SIZE, BASE_SIZE)
    for i in range(1, len(channels)):
        x = _upsample2(x)
        x = _lrelu(_conv3x3(x, ckpt.tensor(f"conv{i}_w"), ckpt.tensor(f"conv{i}_b")), leak)
    x = _conv3x3(x, ckpt.tensor("out_w"), ckpt.tensor("out_b"))
    return np.tanh(x)


def _quantize(images: np.ndarray) -> np.ndarray:
    return np.clip(np.round((images + 1.0) * 127.5), 0, 255).astype(np.uint8)


def generate_images(
    latent_file: LatentFile,
    ckpt: GeneratorCheckpoint,
    source: str = "unknown",
) -> ImageBatch:
    """Run every latent row through the generator, NHWC uint8 output."""
    spec = validate_architecture(ckpt)
    if latent_file.values.shape[1] != spec["latent_dims"]:
        raise ValidationError(
            f"latent file rows have {latent_file.values.shape[1]} dims, "
            f"checkpoint expects {spec['latent_dims']}"
        )
    chunks = []
    for start in range(0, latent_file.rows, FORWARD_CHUNK):
        block = latent_file.values[start : start + FORWARD_CHUNK]
        chunks.append(_quantize(forward(ckpt, block)))
    if chunks:
        images = np.concatenate(chunks, axis=0).transpose(0, 2, 3, 1)
    else:
        images = np.zeros((0, 64, 64, 3), dtype=np.uint8)
    return ImageBatch(
        images=np.ascontiguousarray(images),
        labels=latent_file.labels,
        source=source,
    )


def load_generator(path) -> GeneratorCheckpoint:
    ckpt = read_checkpoint(path)
    validate_architecture(ckpt)
    return ckpt
