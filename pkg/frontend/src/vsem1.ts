/**
 * Browser-side reader for VSEM1 embedding payloads, so users can stream
 * encounters by uploading the dataset's binary files directly.
 *
 * Layout (little-endian): 5 magic bytes "VSEM1", uint32 frame count,
 * uint32 dimension, then count*dim float32 values row-major.
 */

export const VSEM1_MAGIC = 'VSEM1';
export const VSEM1_HEADER_BYTES = 13;

export interface EmbeddingPayload {
  frames: number[][];
  dim: number;
}

export function parseVsem1(buffer: ArrayBuffer): EmbeddingPayload {
  if (buffer.byteLength < VSEM1_HEADER_BYTES) {
    throw new Error(
      `payload too short for a header: ${buffer.byteLength} bytes`,
    );
  }
  const magic = String.fromCharCode(...new Uint8Array(buffer, 0, 5));
  if (magic !== VSEM1_MAGIC) {
    throw new Error(`bad magic ${JSON.stringify(magic)}`);
  }
  const view = new DataView(buffer);
  const count = view.getUint32(5, true);
  const dim = view.getUint32(9, true);
  if (count === 0 || dim === 0) {
    throw new Error(`empty payload (count ${count}, dim ${dim})`);
  }
  const expected = VSEM1_HEADER_BYTES + 4 * count * dim;
  if (buffer.byteLength !== expected) {
    throw new Error(
      `body size mismatch: expected ${expected} bytes, got ${buffer.byteLength}`,
    );
  }
  const frames: number[][] = [];
  let offset = VSEM1_HEADER_BYTES;
  for (let i = 0; i < count; i += 1) {
    const row: number[] = [];
    for (let j = 0; j < dim; j += 1) {
      const value = view.getFloat32(offset, true);
      if (!Number.isFinite(value)) {
        throw new Error(`non-finite value at frame ${i}, component ${j}`);
      }
      row.push(value);
      offset += 4;
    }
    frames.push(row);
  }
  return { frames, dim };
}
