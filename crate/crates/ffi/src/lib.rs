//! C ABI over the nanbu core: an opaque simulation handle, the kernel
//! weights, the azimuth alignment and exact W₂². Every function returns a
//! [`NanbuStatus`]; on failure the message is kept per thread and can be
//! fetched with [`nanbu_last_error_message`].

use nanbu::rng::{purpose, stream};
use nanbu::sim::{apply_event, sample_initial, CollisionEvent, EventStream, InitialLaw, ParticleState};
use nanbu::{KernelSpec, NanbuError, Vec3};
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NanbuStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Input = 3,
    Capacity = 4,
    Numerical = 5,
    Config = 6,
    Io = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NanbuKernelFamily {
    MaxwellMolecules = 0,
    HardPotential = 1,
    HardSphere = 2,
}

/// Kernel |v−v_*|^γ β(θ). `gamma` is ignored for Maxwell molecules,
/// both exponents for hard spheres.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct NanbuKernel {
    pub family: NanbuKernelFamily,
    pub gamma: f64,
    pub nu: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NanbuVec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<NanbuVec3> for Vec3 {
    fn from(v: NanbuVec3) -> Self {
        Vec3::new(v.x, v.y, v.z)
    }
}

impl From<Vec3> for NanbuVec3 {
    fn from(v: Vec3) -> Self {
        NanbuVec3 { x: v.x, y: v.y, z: v.z }
    }
}

/// Opaque simulation state.
pub struct NanbuSim {
    state: ParticleState,
    events: EventStream,
    pending: CollisionEvent,
    spec: KernelSpec,
    k: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &NanbuError) -> NanbuStatus {
    match e {
        NanbuError::Domain(_) => NanbuStatus::Domain,
        NanbuError::Input(_) => NanbuStatus::Input,
        NanbuError::Capacity(_) => NanbuStatus::Capacity,
        NanbuError::Numerical { .. } => NanbuStatus::Numerical,
        NanbuError::Config(_) => NanbuStatus::Config,
        NanbuError::Io(_) => NanbuStatus::Io,
    }
}

enum Fail {
    Null(&'static str),
    Lib(NanbuError),
}

impl From<NanbuError> for Fail {
    fn from(e: NanbuError) -> Self {
        Fail::Lib(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> NanbuStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NanbuStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            NanbuStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            NanbuStatus::Panic
        }
    }
}

fn nonnull<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    // SAFETY: the caller promises a valid pointer when non-null.
    unsafe { p.as_ref() }.ok_or(Fail::Null(what))
}

fn nonnull_mut<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    // SAFETY: as above, plus exclusive access for the call.
    unsafe { p.as_mut() }.ok_or(Fail::Null(what))
}

fn cloud<'a>(p: *const NanbuVec3, len: usize, what: &'static str) -> Result<&'a [NanbuVec3], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    // SAFETY: the caller passes `len` readable elements.
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

fn to_cloud(p: &[NanbuVec3]) -> Vec<Vec3> {
    p.iter().map(|v| Vec3::from(*v)).collect()
}

fn kernel_spec(k: &NanbuKernel) -> Result<KernelSpec, Fail> {
    Ok(match k.family {
        NanbuKernelFamily::MaxwellMolecules => KernelSpec::maxwell(k.nu)?,
        NanbuKernelFamily::HardPotential => KernelSpec::hard_potential(k.gamma, k.nu)?,
        NanbuKernelFamily::HardSphere => KernelSpec::hard_sphere(),
    })
}

/// Copy the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL,
/// 0 if no error was recorded.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn nanbu_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nanbu_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// New simulation of `n` particles with i.i.d. Gaussian initial velocities
/// (component standard deviation `sigma`) at cutoff `k`. Same seed, same
/// trajectory as the core simulator's replica 0.
///
/// # Safety
/// `kernel` must be valid to read and `out` valid to write.
#[no_mangle]
pub unsafe extern "C" fn nanbu_sim_new(kernel: *const NanbuKernel, n: usize, k: f64, sigma: f64, seed: u64, out: *mut *mut NanbuSim) -> NanbuStatus {
    guard(|| {
        let out = nonnull_mut(out, "out")?;
        *out = std::ptr::null_mut();
        let spec = kernel_spec(nonnull(kernel, "kernel")?)?;
        nanbu::kernel::check_cutoff(k)?;
        if n < 2 {
            return Err(NanbuError::input("need N >= 2 particles").into());
        }
        let law = InitialLaw::Maxwellian { sigma };
        let state = sample_initial(n, &law, &mut stream(seed, purpose::INITIAL, 0))?;
        let mut events = EventStream::new(n, k, stream(seed, purpose::EVENTS, 0));
        let pending = events.next_event();
        *out = Box::into_raw(Box::new(NanbuSim { state, events, pending, spec, k }));
        Ok(())
    })
}

/// Apply every event with time ≤ `t`; the clock then reads `t`.
///
/// # Safety
/// `sim` must come from [`nanbu_sim_new`] and not be freed.
#[no_mangle]
pub unsafe extern "C" fn nanbu_sim_run_until(sim: *mut NanbuSim, t: f64) -> NanbuStatus {
    guard(|| {
        let s = nonnull_mut(sim, "sim")?;
        if !(t >= s.state.time) || !t.is_finite() {
            return Err(NanbuError::input(format!("target time {t} is before the clock {}", s.state.time)).into());
        }
        while s.pending.t <= t {
            apply_event(&mut s.state, &s.pending, s.k, &s.spec);
            s.pending = s.events.next_event();
        }
        s.state.time = t;
        Ok(())
    })
}

/// # Safety
/// `sim` must be a live handle; `out` valid to write.
#[no_mangle]
pub unsafe extern "C" fn nanbu_sim_time(sim: *const NanbuSim, out: *mut f64) -> NanbuStatus {
    guard(|| {
        *nonnull_mut(out, "out")? = nonnull(sim, "sim")?.state.time;
        Ok(())
    })
}

/// Events drawn so far, inert ones included.
///
/// # Safety
/// `sim` must be a live handle; `out` valid to write.
#[no_mangle]
pub unsafe extern "C" fn nanbu_sim_events(sim: *const NanbuSim, out: *mut u64) -> NanbuStatus {
    guard(|| {
        *nonnull_mut(out, "out")? = nonnull(sim, "sim")?.state.events_applied;
        Ok(())
    })
}

/// Copy the velocities into `out`, which must hold exactly N entries.
///
/// # Safety
/// `sim` must be a live handle; `out` must point to `len` writable entries.
#[no_mangle]
pub unsafe extern "C" fn nanbu_sim_velocities(sim: *const NanbuSim, out: *mut NanbuVec3, len: usize) -> NanbuStatus {
    guard(|| {
        let s = nonnull(sim, "sim")?;
        if len != s.state.len() {
            return Err(NanbuError::input(format!("buffer holds {len} entries, the system has {}", s.state.len())).into());
        }
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let dst = std::slice::from_raw_parts_mut(out, len);
        for (d, v) in dst.iter_mut().zip(&s.state.velocities) {
            *d = (*v).into();
        }
        Ok(())
    })
}

/// # Safety
/// `sim` must be null or a handle from [`nanbu_sim_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nanbu_sim_free(sim: *mut NanbuSim) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Deviation angle for the intensity coordinate `z` (relative speed 1).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nanbu_kernel_angle(kernel: *const NanbuKernel, z: f64, out: *mut f64) -> NanbuStatus {
    guard(|| {
        let spec = kernel_spec(nonnull(kernel, "kernel")?)?;
        if !(z >= 0.0) {
            return Err(NanbuError::domain(format!("z must be >= 0, got {z}")).into());
        }
        *nonnull_mut(out, "out")? = spec.g(z);
        Ok(())
    })
}

/// Integrated (1 − cos θ) weight below the cutoff at relative speed `x`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nanbu_kernel_weight_below(kernel: *const NanbuKernel, x: f64, k: f64, out: *mut f64) -> NanbuStatus {
    guard(|| {
        let spec = kernel_spec(nonnull(kernel, "kernel")?)?;
        *nonnull_mut(out, "out")? = spec.phi_k(x, k)?;
        Ok(())
    })
}

/// Integrated (1 − cos θ) weight above the cutoff at relative speed `x`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nanbu_kernel_weight_above(kernel: *const NanbuKernel, x: f64, k: f64, out: *mut f64) -> NanbuStatus {
    guard(|| {
        let spec = kernel_spec(nonnull(kernel, "kernel")?)?;
        *nonnull_mut(out, "out")? = spec.psi_k(x, k)?;
        Ok(())
    })
}

/// Azimuth offsets aligning the frames of `x` and `y`.
///
/// # Safety
/// Output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nanbu_tanaka_angles(x: NanbuVec3, y: NanbuVec3, phi0: *mut f64, phi1: *mut f64) -> NanbuStatus {
    guard(|| {
        let (a, b) = nanbu::geometry::tanaka_angles(x.into(), y.into());
        *nonnull_mut(phi0, "phi0")? = a;
        *nonnull_mut(phi1, "phi1")? = b;
        Ok(())
    })
}

/// Exact W₂² between two uniform clouds of `n` points each.
///
/// # Safety
/// `a` and `b` must point to `n` readable entries; `out` valid to write.
#[no_mangle]
pub unsafe extern "C" fn nanbu_w2_exact(a: *const NanbuVec3, b: *const NanbuVec3, n: usize, out: *mut f64) -> NanbuStatus {
    guard(|| {
        let (a, b) = (cloud(a, n, "a")?, cloud(b, n, "b")?);
        let out = nonnull_mut(out, "out")?;
        *out = nanbu::transport::w2_exact(&to_cloud(a), &to_cloud(b))?.cost;
        Ok(())
    })
}

/// Exact W₂² between uniform clouds of sizes `n` and `m`.
///
/// # Safety
/// `a` must point to `n`, `b` to `m` readable entries; `out` valid to write.
#[no_mangle]
pub unsafe extern "C" fn nanbu_w2_unequal(a: *const NanbuVec3, n: usize, b: *const NanbuVec3, m: usize, out: *mut f64) -> NanbuStatus {
    guard(|| {
        let (a, b) = (cloud(a, n, "a")?, cloud(b, m, "b")?);
        let out = nonnull_mut(out, "out")?;
        *out = nanbu::transport::w2_unequal(&to_cloud(a), &to_cloud(b))?.cost;
        Ok(())
    })
}
