// Browser entry point: wires camera capture, the session websocket, the HUD
// and the fireworks canvas together. Configured via query parameters:
//   ?server=ws://localhost:8765&demo=wave&fps=24
// Keypoints are sent unmirrored; only the video and overlay are flipped for
// natural self-viewing.

import { CaptureLoop, DetectorProvider, KeypointProvider, PoseDetectorLike, SyntheticProvider } from "./capture.js";
import { SessionClient } from "./client.js";
import { FireworksRenderer } from "./fireworks.js";
import { drawGauge, drawSkeleton, gaugeColor } from "./hud.js";

function param(name: string, fallback: string): string {
  return new URLSearchParams(location.search).get(name) ?? fallback;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function pickProvider(
  video: HTMLVideoElement,
  cameraOk: boolean,
): Promise<{ provider: KeypointProvider; label: string } | null> {
  // ?source=synthetic opts into the built-in motion generator; otherwise a
  // missing camera or pose model is an error state and nothing is streamed.
  if (param("source", "auto") === "synthetic") {
    return { provider: new SyntheticProvider(), label: "synthetic provider" };
  }
  const detectorFactory = (globalThis as Record<string, unknown>).pyrofitDetector;
  if (cameraOk && typeof detectorFactory === "function") {
    const detector = (await detectorFactory()) as PoseDetectorLike;
    return { provider: new DetectorProvider(detector, video), label: "on-device model" };
  }
  return null;
}

async function openCamera(video: HTMLVideoElement): Promise<boolean> {
  try {
    const stream = await navigator.mediaDevices.getUserMedia({ video: { width: 640, height: 480 } });
    video.srcObject = stream;
    await video.play();
    return true;
  } catch {
    return false;
  }
}

async function start(): Promise<void> {
  const serverUrl = param("server", "ws://localhost:8765");
  const demo = param("demo", "wave");
  const fps = Number(param("fps", "24"));

  const video = el<HTMLVideoElement>("camera");
  const overlay = el<HTMLCanvasElement>("overlay");
  const stage = el<HTMLCanvasElement>("stage");
  const status = el<HTMLDivElement>("status");
  const toast = el<HTMLDivElement>("toast");

  const cameraOk = await openCamera(video);
  const picked = await pickProvider(video, cameraOk);
  if (!picked) {
    toast.style.display = "block";
    toast.textContent = cameraOk
      ? "No pose model available - provide globalThis.pyrofitDetector or add ?source=synthetic"
      : "Camera unavailable - allow access and reload, or add ?source=synthetic";
    status.textContent = "error: no keypoint source";
    return;
  }
  const { provider, label } = picked;

  const renderer = new FireworksRenderer();
  let lastKp: number[][] | null = null;

  const client = new SessionClient({
    demo,
    clientName: "pyrofit-ui",
    onSpawn: (spec) => renderer.spawn(spec),
  });

  const ws = new WebSocket(`${serverUrl.replace(/\/$/, "")}/session`);
  client.attach({ send: (d) => ws.send(d), close: () => ws.close() });
  ws.onopen = () => client.onOpen();
  ws.onmessage = (ev) => client.onMessage(ev.data);
  ws.onclose = () => client.onClose();
  ws.onerror = () => client.onClose();
  addEventListener("beforeunload", () => client.bye());

  const capture = new CaptureLoop(provider, {
    targetFps: fps,
    onFrame: (tMs, kp) => {
      lastKp = kp;
      client.sendFrame(tMs, kp);
    },
  });
  capture.start();

  const overlayCtx = overlay.getContext("2d")!;
  const stageCtx = stage.getContext("2d")!;

  function frame(nowMs: number): void {
    renderer.update(nowMs);
    renderer.draw(stageCtx, stage.width, stage.height);

    overlayCtx.clearRect(0, 0, overlay.width, overlay.height);
    overlayCtx.save();
    overlayCtx.translate(overlay.width, 0);
    overlayCtx.scale(-1, 1); // mirror to match the flipped video
    if (lastKp) {
      const reminder = client.activeReminder();
      drawSkeleton(
        overlayCtx, lastKp,
        overlay.width / 640, overlay.height / 480,
        reminder ? reminder.worst : [],
      );
    }
    overlayCtx.restore();
    drawGauge(overlayCtx, client.score?.S ?? null, 60, 12, 12, 160, 22);

    const reminder = client.activeReminder();
    toast.style.display = reminder ? "block" : "none";
    if (reminder) {
      toast.textContent = `Check your form! Worst angle pairs: ${reminder.worst.join(", ")}`;
    }

    const rtt = client.score?.roundTripMs;
    status.textContent = [
      `demo=${demo}`,
      `source=${label}${cameraOk ? "" : " (no camera)"}`,
      `state=${client.connection}`,
      `score=${client.score ? client.score.S.toFixed(0) : "-"}`,
      client.score ? `gauge=${gaugeColor(client.score.S)}` : "",
      rtt == null ? "" : `rtt=${rtt.toFixed(0)}ms`,
      `sent=${client.stats.framesSent}`,
      client.summary ? `final mean=${client.summary.mean_S}` : "",
    ].filter(Boolean).join("  ");

    requestAnimationFrame(frame);
  }
  requestAnimationFrame(frame);
}

void start();
