package player.net;

import java.util.HashMap;
import java.util.Map;

public class LyricsFetcher {

    private final Map<String, String> lyricsCache = new HashMap<>();
    private String fetcherAgent = "player/1.0";

    public String fetchLyricsForTrack(Track track) {
        String key = track.artist() + "/" + track.title();
        String cached = lyricsCache.get(key);
        if (cached != null) {
            return cached;
        }
        String lyricsText = HttpGateway.get(lyricsUrl(track), fetcherAgent);
        if (lyricsText != null) {
            cacheLyricsLocally(key, lyricsText);
        }
        return lyricsText;
    }

    public void cacheLyricsLocally(String key, String lyricsText) {
        lyricsCache.put(key, lyricsText);
    }

    private String lyricsUrl(Track track) {
        return "https://lyrics.example/" + track.artist() + "/" + track.title();
    }
}
