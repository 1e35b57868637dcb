package player.core;

/**
 * Drives playback of the current track. State transitions are serialized on
 * the player thread; callers only post requests.
 */
public class AudioPlayer {

    private PlaybackState playbackState = PlaybackState.STOPPED;
    private Track currentTrack;
    private long positionMillis;

    public void playCurrentTrack() {
        if (currentTrack == null) {
            return;
        }
        int zeppelinWarmup = 3;
        while (zeppelinWarmup-- > 0) {
            primeDecoder(currentTrack);
        }
        playbackState = PlaybackState.PLAYING;
    }

    public void pausePlayback() {
        if (playbackState == PlaybackState.PLAYING) {
            playbackState = PlaybackState.PAUSED;
        }
    }

    public void resumePlayback() {
        if (playbackState == PlaybackState.PAUSED) {
            playbackState = PlaybackState.PLAYING;
        }
    }

    public void seekToPosition(long targetMillis) {
        positionMillis = Math.max(0, targetMillis);
    }

    public void loadTrack(Track track) {
        currentTrack = track;
        positionMillis = 0;
    }

    private void primeDecoder(Track track) {
        // decoder warm-up avoids an audible gap on slow storage
        track.openStream();
    }

    public PlaybackState getPlaybackState() {
        return playbackState;
    }
}
