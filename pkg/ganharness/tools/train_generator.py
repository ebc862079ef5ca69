"""Train the desk-scale conditional generator and export a GANC checkpoint.

The generator is the deconvolution stack described in
ganharness.generator; training minimizes a multi-scale maximum mean
discrepancy between generated batches and per-class target batches, which
is stable at tiny scale without a discriminator network. Targets come
either from the built-in procedural dataset (--synthetic) or from a local
CIFAR-10 python-batches directory (--cifar DIR, images upsampled to
64x64). Quality expectations are desk scale: the point is a fixed,
versioned checkpoint whose outputs respond to every latent dimension and
to the one-hot class block.

Requires torch (CPU is fine):

    python tools/train_generator.py --synthetic --steps 1200 \
        --seed 7 --out src/ganharness/data/desk_g_v1.ganc
"""

import argparse
import pickle
import sys
import time
from pathlib import Path

import numpy as np

try:
    import torch
    from torch import nn
    from torch.nn import functional as F
except ImportError:
    sys.exit("train_generator.py requires torch (pip install torch)")

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from ganharness.checkpoint import GeneratorCheckpoint, write_checkpoint
from ganharness.generator import BASE_SIZE, DEFAULT_CHANNELS, DEFAULT_LEAK
from ganharness.synth import N_CLASSES, synth_batch

LATENT_DIMS = 110
RANDOM_DIMS = 100


class Generator(nn.Module):
    """Torch mirror of the numpy inference network in ganharness.generator."""

    def __init__(self, channels=DEFAULT_CHANNELS, leak=DEFAULT_LEAK):
        super().__init__()
        self.leak = leak
        self.channels = channels
        self.fc = nn.Linear(LATENT_DIMS, channels[0] * BASE_SIZE * BASE_SIZE)
        self.convs = nn.ModuleList(
            nn.Conv2d(channels[i - 1], channels[i], 3, padding=1)
            for i in range(1, len(channels))
        )
        self.out = nn.Conv2d(channels[-1], 3, 3, padding=1)

    def forward(self, z):
        x = F.leaky_relu(self.fc(z), self.leak)
        x = x.view(z.shape[0], self.channels[0], BASE_SIZE, BASE_SIZE)
        for conv in self.convs:
            x = F.interpolate(x, scale_factor=2, mode="nearest")
            x = F.leaky_relu(conv(x), self.leak)
        return torch.tanh(self.out(x))


def _gaussian_mmd2(x, y, sigma2s):
    def mean_kernel(a, b):
        d2 = torch.cdist(a, b) ** 2
        return sum(torch.exp(-d2 / (2.0 * s2)) for s2 in sigma2s).mean()

    return mean_kernel(x, x) + mean_kernel(y, y) - 2.0 * mean_kernel(x, y)


def _feature_scales(images):
    """Full-resolution and 8x-pooled pixel vectors for the MMD."""
    full = images.reshape(images.shape[0], -1)
    coarse = F.avg_pool2d(images, 8).reshape(images.shape[0], -1)
    return full, coarse


def _load_cifar(root):
    """CIFAR-10 python batches -> dict label(1..10) -> (n, 3, 64, 64)."""
    root = Path(root)
    images, labels = [], []
    for name in sorted(root.glob("data_batch_*")):
        with open(name, "rb") as fh:
            doc = pickle.load(fh, encoding="bytes")
        images.append(np.asarray(doc[b"data"], dtype=np.uint8))
        labels.append(np.asarray(doc[b"labels"], dtype=np.int64))
    if not images:
        sys.exit(f"no data_batch_* files under {root}")
    flat = np.concatenate(images).reshape(-1, 3, 32, 32)
    flat = flat.repeat(2, axis=2).repeat(2, axis=3)
    scaled = flat.astype(np.float32) / 127.5 - 1.0
    labs = np.concatenate(labels) + 1
    return {c: scaled[labs == c] for c in range(1, N_CLASSES + 1)}


def _one_hot(label, n):
    block = torch.zeros(n, N_CLASSES)
    block[:, label - 1] = 1.0
    return block


def export(model: Generator, out_path, seed: int, steps: int, source: str):
    tensors = {
        "fc_w": model.fc.weight.detach().numpy(),
        "fc_b": model.fc.bias.detach().numpy(),
        "out_w": model.out.weight.detach().numpy(),
        "out_b": model.out.bias.detach().numpy(),
    }
    for i, conv in enumerate(model.convs, start=1):
        tensors[f"conv{i}_w"] = conv.weight.detach().numpy()
        tensors[f"conv{i}_b"] = conv.bias.detach().numpy()
    arch = {
        "family": "cond-deconv",
        "latent_dims": LATENT_DIMS,
        "image_size": BASE_SIZE * 2 ** (len(model.channels) - 1),
        "channels": list(model.channels),
        "leak": model.leak,
        "training": {"seed": seed, "steps": steps, "data": source},
    }
    write_checkpoint(out_path, GeneratorCheckpoint(arch=arch, tensors=tensors))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    data = parser.add_mutually_exclusive_group(required=True)
    data.add_argument("--synthetic", action="store_true",
                      help="train on the built-in procedural classes")
    data.add_argument("--cifar", help="CIFAR-10 python-batches directory")
    parser.add_argument("--steps", type=int, default=1200)
    parser.add_argument("--batch", type=int, default=64)
    parser.add_argument("--lr", type=float, default=1e-3)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--out", required=True, help="output GANC path")
    args = parser.parse_args(argv)

    torch.manual_seed(args.seed)
    data_rng = np.random.default_rng(args.seed)
    cifar = _load_cifar(args.cifar) if args.cifar else None

    model = Generator()
    optimizer = torch.optim.Adam(model.parameters(), lr=args.lr)

    def target_batch(label):
        if cifar is None:
            return torch.from_numpy(synth_batch(label, args.batch, data_rng))
        pool = cifar[label]
        pick = data_rng.integers(0, pool.shape[0], args.batch)
        return torch.from_numpy(pool[pick])

    # Bandwidths frozen from the first batch of each class (median heuristic
    # at three spreads) so the objective stays fixed during training.
    sigma2s = {}
    for label in range(1, N_CLASSES + 1):
        full, coarse = _feature_scales(target_batch(label))
        s2f = torch.median(torch.cdist(full, full) ** 2).item() or 1.0
        s2c = torch.median(torch.cdist(coarse, coarse) ** 2).item() or 1.0
        sigma2s[label] = (
            [0.5 * s2f, s2f, 2.0 * s2f],
            [0.5 * s2c, s2c, 2.0 * s2c],
        )

    t0 = time.time()
    for step in range(args.steps):
        label = 1 + step % N_CLASSES
        x = target_batch(label)
        z = torch.cat(
            [torch.rand(args.batch, RANDOM_DIMS) * 2.0 - 1.0,
             _one_hot(label, args.batch)],
            dim=1,
        )
        g = model(z)
        gf, gc = _feature_scales(g)
        xf, xc = _feature_scales(x)
        loss = (_gaussian_mmd2(gf, xf, sigma2s[label][0])
                + _gaussian_mmd2(gc, xc, sigma2s[label][1]))
        optimizer.zero_grad()
        loss.backward()
        optimizer.step()
        if step % 100 == 0 or step == args.steps - 1:
            print(f"step {step:5d} class {label:2d} loss {loss.item():.5f} "
                  f"({time.time() - t0:.0f}s)", flush=True)

    source = "synthetic" if cifar is None else "cifar-10"
    export(model, args.out, args.seed, args.steps, source)
    print(f"wrote checkpoint {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
