import { BundleSource, HttpSource } from "./api";
import { createApp } from "./app";

async function boot() {
  const root = document.getElementById("app")!;
  const params = new URLSearchParams(window.location.search);
  const bundleUrl = params.get("bundle");
  if (bundleUrl) {
    const bundle = await (await fetch(bundleUrl)).json();
    createApp(root, new BundleSource(bundle));
  } else {
    createApp(root, new HttpSource(""));
  }
}

void boot();
