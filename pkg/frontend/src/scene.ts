/** Mono three.js rendering of the task scenes: color-coded target spheres,
 * the portal disc with its remote view rendered to a texture, docking
 * tetrahedra (opaque object, semi-transparent target with a green outline
 * inside tolerance), the green start box, and ray/arc guides.
 *
 * Rendering is mono by design: the runner evaluates interaction logic, not
 * depth perception.
 */

import * as THREE from "three";
import { Vec3 } from "./math.js";
import { HighlightState, LayoutSphere, regularTetrahedron, DOCK_EDGE } from "./tasks.js";

const COLOR: Record<HighlightState, number> = {
  neutral: 0xf2f2f2,   // white
  target: 0xd03030,    // red
  hover: 0x3060d0,     // blue
};

const VERTEX_COLORS = [0xd03030, 0x30a050, 0x3060d0, 0xd0c030];

const v3 = (v: Vec3) => new THREE.Vector3(v[0], v[1], v[2]);

export class TaskScene {
  readonly scene = new THREE.Scene();
  readonly camera: THREE.PerspectiveCamera;
  readonly renderer: THREE.WebGLRenderer;
  private spheres: THREE.Mesh[] = [];
  private rayLine: THREE.Line | null = null;
  private startBox: THREE.Mesh | null = null;
  private portalDisc: THREE.Mesh | null = null;
  private portalTarget: THREE.WebGLRenderTarget | null = null;
  private portalCamera: THREE.PerspectiveCamera | null = null;
  private dockMesh: THREE.LineSegments | null = null;
  private targetMesh: THREE.LineSegments | null = null;

  constructor(canvas: HTMLCanvasElement) {
    this.renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
    this.renderer.setSize(canvas.clientWidth, canvas.clientHeight, false);
    this.camera = new THREE.PerspectiveCamera(
      70, canvas.clientWidth / canvas.clientHeight, 0.05, 100);
    this.camera.position.set(0, 1.7, 0);
    this.scene.background = new THREE.Color(0x181a20);
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.7));
    const sun = new THREE.DirectionalLight(0xffffff, 1.2);
    sun.position.set(3, 8, 2);
    this.scene.add(sun);
    const floor = new THREE.Mesh(
      new THREE.PlaneGeometry(40, 40),
      new THREE.MeshStandardMaterial({ color: 0x2a2e38 }));
    floor.rotation.x = -Math.PI / 2;
    this.scene.add(floor);
    const mark = new THREE.Mesh(
      new THREE.RingGeometry(0.12, 0.18, 24),
      new THREE.MeshBasicMaterial({ color: 0xc03030, side: THREE.DoubleSide }));
    mark.rotation.x = -Math.PI / 2;
    mark.position.y = 0.01;
    this.scene.add(mark);
  }

  showStartBox(position: Vec3): void {
    this.clearStartBox();
    this.startBox = new THREE.Mesh(
      new THREE.BoxGeometry(0.3, 0.3, 0.3),
      new THREE.MeshStandardMaterial({ color: 0x30c060 }));
    this.startBox.position.copy(v3(position));
    this.scene.add(this.startBox);
  }

  clearStartBox(): void {
    if (this.startBox) {
      this.scene.remove(this.startBox);
      this.startBox = null;
    }
  }

  setSpheres(spheres: LayoutSphere[]): void {
    this.clearSpheres();
    for (const s of spheres) {
      const mesh = new THREE.Mesh(
        new THREE.SphereGeometry(s.radius, 24, 16),
        new THREE.MeshStandardMaterial({ color: COLOR.neutral }));
      mesh.position.copy(v3(s.center));
      this.spheres.push(mesh);
      this.scene.add(mesh);
    }
  }

  clearSpheres(): void {
    for (const m of this.spheres) this.scene.remove(m);
    this.spheres = [];
  }

  /** Apply highlight states; exactly one target, hover follows the pick. */
  updateHighlights(stateOf: (sphereId: number) => HighlightState): void {
    this.spheres.forEach((mesh, i) => {
      (mesh.material as THREE.MeshStandardMaterial).color.setHex(COLOR[stateOf(i)]);
    });
  }

  showRay(origin: Vec3, pointsAlong: Vec3[]): void {
    this.clearRay();
    const geo = new THREE.BufferGeometry().setFromPoints(
      [v3(origin), ...pointsAlong.map(v3)]);
    this.rayLine = new THREE.Line(geo, new THREE.LineBasicMaterial({ color: 0x80c0ff }));
    this.scene.add(this.rayLine);
  }

  clearRay(): void {
    if (this.rayLine) {
      this.scene.remove(this.rayLine);
      this.rayLine = null;
    }
  }

  /** The primary disc showing the portal camera's view as a texture. */
  showPortalDisc(center: Vec3, radius: number): void {
    this.clearPortalDisc();
    this.portalTarget = new THREE.WebGLRenderTarget(768, 768);
    this.portalCamera = new THREE.PerspectiveCamera(70, 1, 0.05, 100);
    this.portalDisc = new THREE.Mesh(
      new THREE.CircleGeometry(radius, 48),
      new THREE.MeshBasicMaterial({ map: this.portalTarget.texture }));
    this.portalDisc.position.copy(v3(center));
    this.scene.add(this.portalDisc);
  }

  clearPortalDisc(): void {
    if (this.portalDisc) {
      this.scene.remove(this.portalDisc);
      this.portalDisc = null;
      this.portalTarget?.dispose();
      this.portalTarget = null;
      this.portalCamera = null;
    }
  }

  setDocking(dockPose: { position: Vec3; vertices: Vec3[] },
             targetVertices: Vec3[], withinTolerance: boolean): void {
    this.clearDocking();
    this.dockMesh = this.tetraEdges(dockPose.vertices,
      withinTolerance ? 0x30d060 : 0xe0e0e0, 1.0);
    this.targetMesh = this.tetraEdges(targetVertices, 0x909090, 0.4);
    this.scene.add(this.dockMesh, this.targetMesh);
    for (const [verts, parent] of [[dockPose.vertices, this.dockMesh],
                                   [targetVertices, this.targetMesh]] as const) {
      verts.forEach((vtx, i) => {
        const ball = new THREE.Mesh(
          new THREE.SphereGeometry(0.025, 12, 8),
          new THREE.MeshBasicMaterial({ color: VERTEX_COLORS[i] }));
        ball.position.copy(v3(vtx));
        (parent as THREE.Object3D).add(ball);
        ball.position.sub((parent as THREE.Object3D).position);
      });
    }
  }

  private tetraEdges(vertices: Vec3[], color: number, opacity: number): THREE.LineSegments {
    const pairs: [number, number][] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
    const pts = pairs.flatMap(([a, b]) => [v3(vertices[a]), v3(vertices[b])]);
    const geo = new THREE.BufferGeometry().setFromPoints(pts);
    return new THREE.LineSegments(geo, new THREE.LineBasicMaterial(
      { color, transparent: opacity < 1, opacity }));
  }

  clearDocking(): void {
    for (const m of [this.dockMesh, this.targetMesh]) if (m) this.scene.remove(m);
    this.dockMesh = this.targetMesh = null;
  }

  /** Render one frame; when the portal is open, render its view first. */
  render(portalCameraPosition?: Vec3, portalLookAt?: Vec3): void {
    if (this.portalDisc && this.portalTarget && this.portalCamera
        && portalCameraPosition && portalLookAt) {
      this.portalCamera.position.copy(v3(portalCameraPosition));
      this.portalCamera.lookAt(v3(portalLookAt));
      this.portalDisc.visible = false;
      this.renderer.setRenderTarget(this.portalTarget);
      this.renderer.render(this.scene, this.portalCamera);
      this.renderer.setRenderTarget(null);
      this.portalDisc.visible = true;
      this.portalDisc.lookAt(this.camera.position);
    }
    this.renderer.render(this.scene, this.camera);
  }
}

export function dockVertices(position: Vec3, orientation: [number, number, number, number]): Vec3[] {
  return regularTetrahedron(DOCK_EDGE, { position, orientation });
}
