import { ApiClient } from "./api";
import { createApp } from "./app";
import "./styles.css";

const api = new ApiClient(
  localStorage.getItem("modkit.api") ?? "",
  localStorage.getItem("modkit.token"),
);

createApp(api, document.getElementById("app")!);
